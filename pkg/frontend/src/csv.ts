/**
 * Readers for the sweep artifacts: grid.csv, overlay.csv and
 * grid_meta.json. Numbers are parsed with Number() so the "nan" cells
 * written for unconverged points become NaN.
 */

export interface Grid {
  /** Sweep axis in file order (dBm for power sweeps, GHz for drive sweeps). */
  sweepValues: number[];
  /** Probe axis in GHz, in file order. */
  probeGhz: number[];
  /** Row-major photon numbers, values[s * probeGhz.length + p]. */
  values: Float64Array;
  /** 1 where the cell converged, 0 otherwise. */
  converged: Uint8Array;
}

export interface OverlayRow {
  sweepValue: number;
  from: string;
  to: string;
  freqGhz: number;
  matelem: number;
  intensity: number;
}

export interface GridMeta {
  mode: string;
  engine: string;
  normalized: boolean;
  sweepAxis: { name: string; values: number[] };
  probeAxisGhz: number[];
  kappaPerUs: number;
  paramsSha256: string;
}

const GRID_HEADER = "drive_value,probe_GHz,n_tilde,converged";
const OVERLAY_HEADER = "sweep_value,from,to,freq_GHz,matelem,intensity";

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.length > 0);
}

export function parseGridCsv(text: string): Grid {
  const lines = splitLines(text);
  if (lines[0] !== GRID_HEADER) {
    throw new Error(`unexpected grid header: ${lines[0]}`);
  }
  const sweepValues: number[] = [];
  const probeGhz: number[] = [];
  const sweepIndex = new Map<string, number>();
  const probeIndex = new Map<string, number>();
  const cells: { s: number; p: number; value: number; ok: number }[] = [];

  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 4) {
      throw new Error(`malformed grid row: ${line}`);
    }
    let s = sweepIndex.get(parts[0]);
    if (s === undefined) {
      s = sweepValues.length;
      sweepIndex.set(parts[0], s);
      sweepValues.push(Number(parts[0]));
    }
    let p = probeIndex.get(parts[1]);
    if (p === undefined) {
      p = probeGhz.length;
      probeIndex.set(parts[1], p);
      probeGhz.push(Number(parts[1]));
    }
    cells.push({ s, p, value: Number(parts[2]), ok: Number(parts[3]) });
  }

  if (cells.length !== sweepValues.length * probeGhz.length) {
    throw new Error(
      `grid is not rectangular: ${cells.length} cells for ` +
        `${sweepValues.length} x ${probeGhz.length} axes`,
    );
  }
  const values = new Float64Array(cells.length).fill(NaN);
  const converged = new Uint8Array(cells.length);
  for (const cell of cells) {
    const k = cell.s * probeGhz.length + cell.p;
    values[k] = cell.value;
    converged[k] = cell.ok ? 1 : 0;
  }
  return { sweepValues, probeGhz, values, converged };
}

export function parseOverlayCsv(text: string): OverlayRow[] {
  const lines = splitLines(text);
  if (lines[0] !== OVERLAY_HEADER) {
    throw new Error(`unexpected overlay header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    if (parts.length !== 6) {
      throw new Error(`malformed overlay row: ${line}`);
    }
    return {
      sweepValue: Number(parts[0]),
      from: parts[1],
      to: parts[2],
      freqGhz: Number(parts[3]),
      matelem: Number(parts[4]),
      intensity: Number(parts[5]),
    };
  });
}

export function parseGridMeta(text: string): GridMeta {
  const raw = JSON.parse(text);
  if (raw.schema !== "polariton-grid/1") {
    throw new Error(`unexpected meta schema: ${raw.schema}`);
  }
  return {
    mode: raw.mode,
    engine: raw.engine,
    normalized: raw.normalized,
    sweepAxis: { name: raw.sweep_axis.name, values: raw.sweep_axis.values },
    probeAxisGhz: raw.probe_axis_GHz,
    kappaPerUs: raw.device.kappa_per_us,
    paramsSha256: raw.params_sha256,
  };
}
