/** Viewer state and its transitions, kept free of DOM so the navigation
 * rules are testable headless. */

import { clamp, normalizeYaw } from "./geometry.js";
import { TourDocument, TourEdge, edgesFrom, nodeById, reverseEdge } from "./tour.js";

export const FOV_MIN = 30;
export const FOV_MAX = 120;
export const PITCH_MIN = -90;
export const PITCH_MAX = 90;
export const FOV_DEFAULT = 90;

export interface View {
  yawDeg: number;
  pitchDeg: number;
  fovDeg: number;
}

export interface ViewerState {
  tour: TourDocument;
  currentNode: string;
  view: View;
  /** transient operator-facing message (e.g. clicked an inert hotspot) */
  notice: string | null;
}

function clampView(view: View): View {
  return {
    yawDeg: normalizeYaw(view.yawDeg),
    pitchDeg: clamp(view.pitchDeg, PITCH_MIN, PITCH_MAX),
    fovDeg: clamp(view.fovDeg, FOV_MIN, FOV_MAX),
  };
}

/** Initial state: first node of the document, level view at default zoom. */
export function createState(tour: TourDocument): ViewerState {
  const first = tour.nodes[0];
  if (!first) throw new Error("tour has no nodes");
  return {
    tour,
    currentNode: first.id,
    view: { yawDeg: 0, pitchDeg: 0, fovDeg: FOV_DEFAULT },
    notice: null,
  };
}

/** Drag by a yaw/pitch delta in degrees (already scaled by the caller). */
export function applyDrag(state: ViewerState, dYawDeg: number, dPitchDeg: number): ViewerState {
  return {
    ...state,
    view: clampView({
      yawDeg: state.view.yawDeg + dYawDeg,
      pitchDeg: state.view.pitchDeg + dPitchDeg,
      fovDeg: state.view.fovDeg,
    }),
  };
}

/** Zoom by a fov delta in degrees (wheel up = negative = zoom in). */
export function applyZoom(state: ViewerState, dFovDeg: number): ViewerState {
  return {
    ...state,
    view: clampView({ ...state.view, fovDeg: state.view.fovDeg + dFovDeg }),
  };
}

/** Entry yaw after traversing `edge`: face away from the hotspot that leads
 * back, i.e. keep the direction of travel.  When the target has no edge
 * back (k-nearest is not symmetric) there is no "back" to face away from,
 * so fall back to the panorama's reference yaw 0. */
export function entryYawDeg(tour: TourDocument, edge: TourEdge): number {
  const back = reverseEdge(tour, edge);
  return back === undefined ? 0 : normalizeYaw(back.yaw_deg + 180);
}

/**
 * Traverse an outgoing edge of the current node.
 *
 * Edges to panoramas whose image is missing are inert: the state is
 * unchanged apart from a notice.  Pitch resets to level on arrival.
 */
export function navigate(state: ViewerState, edge: TourEdge): ViewerState {
  if (edge.from !== state.currentNode) {
    throw new Error(`edge ${edge.from}->${edge.to} does not start at ${state.currentNode}`);
  }
  const target = nodeById(state.tour, edge.to);
  if (target.missing) {
    return { ...state, notice: `image for "${target.id}" is missing` };
  }
  return {
    ...state,
    currentNode: target.id,
    view: clampView({ yawDeg: entryYawDeg(state.tour, edge), pitchDeg: 0, fovDeg: state.view.fovDeg }),
    notice: null,
  };
}

/** Outgoing edges of the current node, in document order. */
export function currentEdges(state: ViewerState): TourEdge[] {
  return edgesFrom(state.tour, state.currentNode);
}
