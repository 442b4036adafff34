/**
 * Small deterministic force-directed layout.
 *
 * Springs pull linked nodes to a rest distance that shrinks as the link
 * strengthens (distance approximates inverse link strength), a quadratic
 * repulsion keeps nodes apart, and a band force anchors each node to its
 * hierarchy level's y lane. No randomness: the same view model always
 * relaxes to the same positions.
 */

export interface LayoutNode {
  x: number;
  y: number;
  bandY: number;
  radius: number;
}

export interface LayoutLink {
  source: number;
  target: number;
  strength: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
}

const SPRING = 0.015;
const REPULSION = 2600;
const BAND_PULL = 0.06;
const CENTER_PULL = 0.005;
const DAMPING = 0.82;

export function restLength(strength: number): number {
  return 60 + 140 * (1 - Math.min(1, Math.max(0, strength)));
}

export function runLayout(
  nodes: LayoutNode[],
  links: LayoutLink[],
  options: LayoutOptions,
): void {
  const { width, height } = options;
  const iterations = options.iterations ?? 250;
  const vx = new Array(nodes.length).fill(0);
  const vy = new Array(nodes.length).fill(0);

  // deterministic jitter so perfectly stacked nodes separate
  nodes.forEach((node, i) => {
    node.x += ((i * 37) % 11) - 5;
    node.y += ((i * 53) % 7) - 3;
  });

  for (let step = 0; step < iterations; step += 1) {
    for (let i = 0; i < nodes.length; i += 1) {
      for (let j = i + 1; j < nodes.length; j += 1) {
        let dx = nodes[j].x - nodes[i].x;
        let dy = nodes[j].y - nodes[i].y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1) {
          // deterministic tie-break for coincident nodes
          dx = 1;
          dy = 0.5;
          d2 = 1.25;
        }
        const force = REPULSION / d2;
        const d = Math.sqrt(d2);
        const fx = (dx / d) * force;
        const fy = (dy / d) * force;
        vx[i] -= fx;
        vy[i] -= fy;
        vx[j] += fx;
        vy[j] += fy;
      }
    }

    for (const link of links) {
      const a = nodes[link.source];
      const b = nodes[link.target];
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(1, Math.hypot(dx, dy));
      const stretch = d - restLength(link.strength);
      const f = SPRING * stretch;
      const fx = (dx / d) * f;
      const fy = (dy / d) * f;
      vx[link.source] += fx;
      vy[link.source] += fy;
      vx[link.target] -= fx;
      vy[link.target] -= fy;
    }

    nodes.forEach((node, i) => {
      vy[i] += (node.bandY - node.y) * BAND_PULL;
      vx[i] += (width / 2 - node.x) * CENTER_PULL;
      vx[i] *= DAMPING;
      vy[i] *= DAMPING;
      node.x += vx[i];
      node.y += vy[i];
      const pad = node.radius + 4;
      node.x = Math.min(width - pad, Math.max(pad, node.x));
      node.y = Math.min(height - pad, Math.max(pad, node.y));
    });
  }
}
