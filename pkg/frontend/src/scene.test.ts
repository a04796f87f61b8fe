import { describe, expect, it } from "vitest";
import {
  composeValue,
  DECAY_S,
  idleBaseline,
  SceneModel,
  SCENE_PARAMS,
} from "./scene.js";

const SIZE = SCENE_PARAMS.find((p) => p.id === "scene/particles.size")!;
const ORBIT = SCENE_PARAMS.find((p) => p.id === "scene/camera.orbit_speed")!;

describe("baseline animation", () => {
  it("idles near each parameter's default and stays in [0,1]", () => {
    for (const p of SCENE_PARAMS) {
      for (let t = 0; t < 30; t += 0.37) {
        const v = idleBaseline(p, t);
        expect(v).toBeGreaterThanOrEqual(0);
        expect(v).toBeLessThanOrEqual(1);
        expect(Math.abs(v - p.baseline)).toBeLessThanOrEqual(0.05 + 1e-12);
      }
    }
  });

  it("actually moves over time", () => {
    const a = idleBaseline(ORBIT, 0);
    const b = idleBaseline(ORBIT, 2);
    expect(a).not.toBe(b);
  });
});

describe("compositing", () => {
  it("additive params offset the baseline by the mapped deviation", () => {
    const base = 0.1;
    expect(composeValue(ORBIT, base, ORBIT.baseline, 1)).toBeCloseTo(base, 12);
    expect(composeValue(ORBIT, base, 0.6, 1)).toBeCloseTo(base + (0.6 - ORBIT.baseline), 12);
    expect(composeValue(ORBIT, base, 0.6, 0)).toBeCloseTo(base, 12);
  });

  it("multiplicative params scale the baseline, neutral at 0.5", () => {
    const base = 0.5;
    expect(composeValue(SIZE, base, 0.5, 1)).toBeCloseTo(base, 12);
    expect(composeValue(SIZE, base, 1.0, 1)).toBeCloseTo(base * 2, 12);
    expect(composeValue(SIZE, base, 0.0, 1)).toBeCloseTo(0, 12);
    expect(composeValue(SIZE, base, 1.0, 0)).toBeCloseTo(base, 12);
  });

  it("results are clamped to [0,1]", () => {
    expect(composeValue(ORBIT, 0.9, 1.0, 1)).toBeLessThanOrEqual(1);
    expect(composeValue(ORBIT, 0.05, 0.0, 1)).toBeGreaterThanOrEqual(0);
    expect(composeValue(SIZE, 0.9, 1.0, 1)).toBeLessThanOrEqual(1);
  });
});

describe("SceneModel decay", () => {
  it("engine influence is full while values flow", () => {
    const m = new SceneModel();
    m.update({ "scene/particles.size": 1.0 }, 10.0);
    expect(m.weightAt(10.0)).toBe(1);
    expect(m.frame(10.0).params["scene/particles.size"]).toBeGreaterThan(
      idleBaseline(SIZE, 10.0),
    );
  });

  it("decays back to the pure baseline within one second of stream loss", () => {
    const m = new SceneModel();
    m.update({ "scene/particles.size": 1.0, "scene/camera.orbit_speed": 1.0 }, 5.0);
    const halfway = m.weightAt(5.0 + DECAY_S / 2);
    expect(halfway).toBeGreaterThan(0);
    expect(halfway).toBeLessThan(1);
    const after = 5.0 + DECAY_S + 0.01;
    expect(m.weightAt(after)).toBe(0);
    const f = m.frame(after);
    for (const p of SCENE_PARAMS) {
      expect(f.params[p.id]).toBeCloseTo(idleBaseline(p, after), 12);
    }
  });

  it("fresh values restore full influence", () => {
    const m = new SceneModel();
    m.update({ "scene/fog.density": 0.9 }, 0.0);
    expect(m.weightAt(2.0)).toBe(0);
    m.update({ "scene/fog.density": 0.9 }, 2.0);
    expect(m.weightAt(2.0)).toBe(1);
  });

  it("ignores non-scene signals when deciding liveness", () => {
    const m = new SceneModel();
    m.update({ "backend0/global/loudness": 3.0 }, 1.0);
    expect(m.weightAt(1.0)).toBe(0);
  });

  it("never-fed model renders the pure idle baseline", () => {
    const m = new SceneModel();
    const f = m.frame(7.0);
    expect(f.engineWeight).toBe(0);
    for (const p of SCENE_PARAMS) {
      expect(f.params[p.id]).toBeCloseTo(idleBaseline(p, 7.0), 12);
    }
  });
});
