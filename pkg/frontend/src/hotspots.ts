/** Hotspot overlay descriptors: everything the DOM layer needs to draw the
 * navigation circles, computed without touching the DOM. */

import { hotspotDiameterPx, projectToScreen } from "./geometry.js";
import { ViewerState, currentEdges } from "./state.js";
import { TourEdge, nodeById } from "./tour.js";

export interface HotspotDescriptor {
  edge: TourEdge;
  /** target panorama cannot be entered (its image file is missing) */
  inert: boolean;
  /** CSS fill; inert hotspots are greyed out instead of distance-coded */
  cssColor: string;
  /** circle diameter in CSS pixels at the state's current fov */
  diameterPx: number;
  /** hover text: target id and distance in the tour's units */
  tooltip: string;
}

export function hotspotDescriptors(state: ViewerState): HotspotDescriptor[] {
  return currentEdges(state).map((edge) => {
    const inert = nodeById(state.tour, edge.to).missing === true;
    const [r, g, b] = edge.color;
    return {
      edge,
      inert,
      cssColor: inert ? "rgb(128, 128, 128)" : `rgb(${r}, ${g}, ${b})`,
      diameterPx: hotspotDiameterPx(edge.size_px, state.view.fovDeg),
      tooltip: `${edge.to} — ${formatDistance(edge.distance)} ${state.tour.units}`,
    };
  });
}

/** Screen placement of one hotspot for the current view and canvas size. */
export function hotspotScreenPosition(
  state: ViewerState,
  edge: TourEdge,
  width: number,
  height: number,
): { x: number; y: number; visible: boolean } {
  return projectToScreen(
    edge.yaw_deg,
    edge.pitch_deg,
    state.view.yawDeg,
    state.view.pitchDeg,
    state.view.fovDeg,
    width,
    height,
  );
}

function formatDistance(distance: number): string {
  return distance >= 100 ? distance.toFixed(0) : distance.toPrecision(3);
}
