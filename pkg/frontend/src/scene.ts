// Scene model for the visual canvas.
//
// Every scene parameter has an idle baseline animation that runs with no
// engine attached. Mapped values modulate the baseline rather than replace
// it: motion-like parameters compose additively, size/intensity-like
// parameters multiplicatively. When the values stream stops, each parameter
// decays back to its baseline within DECAY_S seconds.

export const DECAY_S = 1.0;

export type Compose = "add" | "mul";

export interface SceneParam {
  id: string;
  baseline: number;
  compose: Compose;
}

export const SCENE_PARAMS: SceneParam[] = [
  { id: "scene/particles.size", baseline: 0.5, compose: "mul" },
  { id: "scene/particles.emission_rate", baseline: 0.3, compose: "mul" },
  { id: "scene/camera.orbit_speed", baseline: 0.1, compose: "add" },
  { id: "scene/camera.fov", baseline: 0.5, compose: "add" },
  { id: "scene/light.intensity", baseline: 0.4, compose: "mul" },
  { id: "scene/light.hue", baseline: 0.6, compose: "add" },
  { id: "scene/stars.drift_speed", baseline: 0.1, compose: "add" },
  { id: "scene/fog.density", baseline: 0.2, compose: "add" },
];

const BY_ID = new Map(SCENE_PARAMS.map((p) => [p.id, p]));

function clamp01(x: number): number {
  return Math.min(1, Math.max(0, x));
}

/** Slow idle wobble so the scene is never frozen, engine or not. */
export function idleBaseline(param: SceneParam, t: number): number {
  const phase = hashPhase(param.id);
  return clamp01(param.baseline + 0.05 * Math.sin(0.4 * t + phase));
}

function hashPhase(id: string): number {
  let h = 0;
  for (let i = 0; i < id.length; i++) h = (h * 31 + id.charCodeAt(i)) | 0;
  return (h >>> 0) % 628 / 100; // [0, 2π)
}

/**
 * Compose a mapped engine value with the baseline.
 *
 * `weight` in [0,1] is how much the engine drives the parameter; at 0 the
 * result is the pure baseline. Values arrive normalized to [0,1].
 */
export function composeValue(
  param: SceneParam,
  base: number,
  mapped: number,
  weight: number,
): number {
  if (param.compose === "add") {
    return clamp01(base + weight * (mapped - param.baseline));
  }
  // multiplicative: mapped value scales the baseline; 0.5 is neutral
  const gain = 1 + weight * (2 * mapped - 1);
  return clamp01(base * Math.max(0, gain));
}

export interface SceneFrame {
  params: Record<string, number>;
  engineWeight: number;
}

export class SceneModel {
  private lastValuesAt = -Infinity; // wall-clock time of last values update
  private mapped: Record<string, number> = {};

  /** Feed the latest engine destination values (wall-clock `now`, seconds). */
  update(values: Record<string, number>, now: number): void {
    let touched = false;
    for (const id of Object.keys(values)) {
      if (BY_ID.has(id)) {
        this.mapped[id] = values[id];
        touched = true;
      }
    }
    if (touched) this.lastValuesAt = now;
  }

  /** Engine influence: 1 while values flow, linear decay to 0 over DECAY_S. */
  weightAt(now: number): number {
    const age = now - this.lastValuesAt;
    if (age <= 0) return 1;
    return clamp01(1 - age / DECAY_S);
  }

  /** Resolve every scene parameter at wall-clock time `now` (seconds). */
  frame(now: number): SceneFrame {
    const weight = this.weightAt(now);
    const params: Record<string, number> = {};
    for (const p of SCENE_PARAMS) {
      const base = idleBaseline(p, now);
      const mapped = this.mapped[p.id];
      params[p.id] =
        mapped === undefined ? base : composeValue(p, base, mapped, weight);
    }
    return { params, engineWeight: weight };
  }
}
