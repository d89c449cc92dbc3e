/** Angle and projection helpers shared by the viewer state and the hotspot
 * overlay.  Conventions match the tour generator: camera x right, y down,
 * z forward; yaw = atan2(x, z) in (-180, 180], clockwise-positive seen from
 * above; pitch positive upward. */

export const DEG2RAD = Math.PI / 180;

/** Wrap a yaw in degrees into (-180, 180]. */
export function normalizeYaw(deg: number): number {
  let y = deg % 360;
  if (y <= -180) y += 360;
  else if (y > 180) y -= 360;
  // fold -180 (excluded) onto +180 and -0 onto 0
  return y === 0 ? 0 : y;
}

/** Smallest absolute angular difference between two yaws, in degrees. */
export function yawDelta(a: number, b: number): number {
  const d = Math.abs(normalizeYaw(a - b));
  return Math.min(d, 360 - d);
}

export function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

/** Unit direction for a (yaw, pitch) pair, in camera coordinates. */
export function directionFromYawPitch(yawDeg: number, pitchDeg: number): [number, number, number] {
  const yaw = yawDeg * DEG2RAD;
  const pitch = pitchDeg * DEG2RAD;
  const c = Math.cos(pitch);
  // pitch is positive up while the y axis points down, hence the minus
  return [c * Math.sin(yaw), -Math.sin(pitch), c * Math.cos(yaw)];
}

export interface ScreenPoint {
  x: number;
  y: number;
  /** false when the point is in the back hemisphere (not drawable). */
  visible: boolean;
}

/**
 * Project a panorama direction onto the canvas for a given view.
 *
 * The view is a pinhole camera looking along directionFromYawPitch(viewYaw,
 * viewPitch) with vertical field of view fovDeg.  Screen x grows right,
 * screen y grows down, origin at the top-left of the canvas.
 */
export function projectToScreen(
  targetYawDeg: number,
  targetPitchDeg: number,
  viewYawDeg: number,
  viewPitchDeg: number,
  fovDeg: number,
  width: number,
  height: number,
): ScreenPoint {
  const d = directionFromYawPitch(targetYawDeg, targetPitchDeg);

  // Rotate the world direction into the view frame: first undo the view yaw
  // (about the y axis), then undo the view pitch (about the x axis).
  const yaw = viewYawDeg * DEG2RAD;
  const cy = Math.cos(yaw), sy = Math.sin(yaw);
  const x1 = cy * d[0] - sy * d[2];
  const z1 = sy * d[0] + cy * d[2];
  const y1 = d[1];

  const pitch = viewPitchDeg * DEG2RAD;
  const cp = Math.cos(pitch), sp = Math.sin(pitch);
  // looking up (positive pitch) tilts the view frame, y axis still down
  const y2 = cp * y1 + sp * z1;
  const z2 = -sp * y1 + cp * z1;

  if (z2 <= 1e-9) {
    return { x: NaN, y: NaN, visible: false };
  }
  const focal = height / 2 / Math.tan((fovDeg * DEG2RAD) / 2);
  return {
    x: width / 2 + (focal * x1) / z2,
    y: height / 2 + (focal * y2) / z2,
    visible: true,
  };
}

/** Hotspot diameter in CSS pixels: size_px at fov 90, scaled inversely. */
export function hotspotDiameterPx(sizePx: number, fovDeg: number): number {
  return (sizePx * 90) / fovDeg;
}
