/** Synthetic CSVs in the harness schema, enough to render both figures. */

const HEADER =
  "experiment,graph_family,n,k,noise_level,rule,trial_index,trial_seed,recovered_fraction,status";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function fig2Csv(trials = 5): string {
  const rand = mulberry32(1);
  const lines = [HEADER];
  for (let k = 2; k <= 25; k++) {
    for (const rule of ["borda", "rsd"]) {
      for (let t = 0; t < trials; t++) {
        const base = rule === "borda" ? 0.95 - 0.4 / k : 0.99 - 1.4 / k;
        const frac = Math.min(1, Math.max(0, base + 0.01 * (rand() - 0.5)));
        lines.push(
          `fig2,random,1000,${k},0,${rule},${t},${1000 + t},${frac.toFixed(4)},ok`,
        );
      }
    }
  }
  return lines.join("\n") + "\n";
}

export function fig3Csv(trials = 100): string {
  const rand = mulberry32(2);
  const lines = [HEADER];
  for (const noise of ["0.5", "0"]) {
    for (let t = 0; t < trials; t++) {
      const borda = 0.9 + 0.02 * (rand() - 0.5);
      const spread = noise === "0.5" ? 0.2 : 0.02;
      const rsd = Math.min(1, Math.max(0, 0.8 + spread * (rand() - 0.5)));
      lines.push(`fig3,random,1000,8,${noise},borda,${t},${t},${borda.toFixed(4)},ok`);
      lines.push(`fig3,random,1000,8,${noise},rsd,${t},${t},${rsd.toFixed(4)},ok`);
    }
  }
  return lines.join("\n") + "\n";
}

export { HEADER };
