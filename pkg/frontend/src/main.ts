/** DOM bootstrap: loads tour.json, wires input events to the pure state
 * module, and keeps the hotspot overlay in sync with the renderer. */

import { hotspotDescriptors, hotspotScreenPosition } from "./hotspots.js";
import { PanoRenderer } from "./render.js";
import {
  ViewerState,
  applyDrag,
  applyZoom,
  createState,
  navigate,
} from "./state.js";
import { TourDocument, TourSchemaError, nodeById, validateTour } from "./tour.js";

/** Panoramas above this edge length are downscaled before upload; stitched
 * missions produce frames far beyond common GPU texture limits. */
const MAX_TEXTURE_EDGE = 8192;

const DEFAULT_TOUR_URL = "./fixtures/three-node-tour/tour.json";

function el<K extends keyof HTMLElementTagNameMap>(tag: K, className: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

function showError(title: string, detail: string): void {
  const panel = document.getElementById("error-panel");
  if (!panel) return;
  panel.textContent = "";
  const heading = el("div", "error-title");
  heading.textContent = title;
  const body = el("div", "error-detail");
  body.textContent = detail;
  panel.append(heading, body);
  panel.style.display = "block";
}

class ViewerApp {
  private state: ViewerState;
  private renderer: PanoRenderer;
  private overlay: HTMLElement;
  private status: HTMLElement;
  private badge: HTMLElement;
  private baseUrl: URL;
  private navigationPending = false;
  private noticeTimer: number | undefined;

  constructor(
    private canvas: HTMLCanvasElement,
    tour: TourDocument,
    tourUrl: URL,
    overlay: HTMLElement,
    status: HTMLElement,
    badge: HTMLElement,
  ) {
    this.renderer = new PanoRenderer(canvas);
    this.state = createState(tour);
    this.baseUrl = tourUrl;
    this.overlay = overlay;
    this.status = status;
    this.badge = badge;
    this.bindInput();
  }

  async start(): Promise<void> {
    await this.showCurrentPanorama();
    const frame = () => {
      this.renderer.draw(this.state.view);
      this.placeHotspots();
      requestAnimationFrame(frame);
    };
    requestAnimationFrame(frame);
  }

  private resolveImage(name: string): URL {
    return new URL(name, this.baseUrl);
  }

  private async showCurrentPanorama(): Promise<void> {
    const node = nodeById(this.state.tour, this.state.currentNode);
    this.badge.style.display = "none";
    if (node.missing) {
      this.renderer.clearImage();
      this.flashNotice(`image for "${node.id}" is missing`);
      this.updateStatus();
      return;
    }
    const url = this.resolveImage(node.image);
    const response = await fetch(url);
    if (!response.ok) {
      this.renderer.clearImage();
      this.flashNotice(`failed to fetch ${node.image} (${response.status})`);
      this.updateStatus();
      return;
    }
    let bitmap = await createImageBitmap(await response.blob());
    const limit = Math.min(MAX_TEXTURE_EDGE, this.renderer.maxTextureSize());
    if (Math.max(bitmap.width, bitmap.height) > limit) {
      bitmap = await this.downscale(bitmap, limit);
    }
    this.renderer.setImage(bitmap);
    this.updateStatus();
  }

  /** Downscale with a visible badge: operators zoom into detail, so silent
   * resolution loss would be misleading. */
  private async downscale(bitmap: ImageBitmap, limit: number): Promise<ImageBitmap> {
    const scale = limit / Math.max(bitmap.width, bitmap.height);
    const w = Math.max(1, Math.round(bitmap.width * scale));
    const h = Math.max(1, Math.round(bitmap.height * scale));
    const scaled = await createImageBitmap(bitmap, {
      resizeWidth: w,
      resizeHeight: h,
      resizeQuality: "high",
    });
    this.badge.textContent = `downscaled ${bitmap.width}×${bitmap.height} → ${w}×${h}`;
    this.badge.style.display = "block";
    bitmap.close();
    return scaled;
  }

  private updateStatus(): void {
    this.status.textContent = `${this.state.currentNode} — fov ${Math.round(this.state.view.fovDeg)}°`;
  }

  private flashNotice(text: string): void {
    const notice = document.getElementById("notice");
    if (!notice) return;
    notice.textContent = text;
    notice.style.display = "block";
    if (this.noticeTimer !== undefined) window.clearTimeout(this.noticeTimer);
    this.noticeTimer = window.setTimeout(() => {
      notice.style.display = "none";
    }, 2500);
  }

  private async onHotspotClick(edgeIndex: number): Promise<void> {
    if (this.navigationPending) return; // at most one pending navigation
    const edge = hotspotDescriptors(this.state)[edgeIndex];
    if (!edge) return;
    if (edge.inert) {
      this.flashNotice(`image for "${edge.edge.to}" is missing`);
      return;
    }
    const next = navigate(this.state, edge.edge);
    if (next.currentNode === this.state.currentNode) {
      if (next.notice) this.flashNotice(next.notice);
      return;
    }
    this.navigationPending = true;
    this.state = next;
    this.rebuildHotspots();
    try {
      await this.showCurrentPanorama();
    } finally {
      this.navigationPending = false;
    }
  }

  /** One DOM circle per outgoing edge of the current node. */
  private rebuildHotspots(): void {
    this.overlay.textContent = "";
    hotspotDescriptors(this.state).forEach((spot, index) => {
      const dot = el("div", spot.inert ? "hotspot inert" : "hotspot");
      dot.style.background = spot.cssColor;
      dot.title = spot.tooltip;
      dot.addEventListener("click", (event) => {
        event.stopPropagation();
        void this.onHotspotClick(index);
      });
      this.overlay.appendChild(dot);
    });
  }

  private placeHotspots(): void {
    const spots = hotspotDescriptors(this.state);
    if (this.overlay.childElementCount !== spots.length) this.rebuildHotspots();
    const width = this.canvas.clientWidth;
    const height = this.canvas.clientHeight;
    spots.forEach((spot, index) => {
      const dot = this.overlay.children[index] as HTMLElement | undefined;
      if (!dot) return;
      const pos = hotspotScreenPosition(this.state, spot.edge, width, height);
      const d = spot.diameterPx;
      const inFrame =
        pos.visible && pos.x > -d && pos.x < width + d && pos.y > -d && pos.y < height + d;
      if (!inFrame) {
        dot.style.display = "none";
        return;
      }
      dot.style.display = "block";
      dot.style.width = `${d}px`;
      dot.style.height = `${d}px`;
      dot.style.left = `${pos.x - d / 2}px`;
      dot.style.top = `${pos.y - d / 2}px`;
    });
  }

  private bindInput(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;

    this.canvas.addEventListener("pointerdown", (event) => {
      dragging = true;
      lastX = event.clientX;
      lastY = event.clientY;
      this.canvas.setPointerCapture(event.pointerId);
    });
    this.canvas.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      const degPerPx = this.state.view.fovDeg / this.canvas.clientHeight;
      // dragging the image right turns the view left
      this.state = applyDrag(
        this.state,
        -(event.clientX - lastX) * degPerPx,
        (event.clientY - lastY) * degPerPx,
      );
      lastX = event.clientX;
      lastY = event.clientY;
    });
    const stop = () => {
      dragging = false;
    };
    this.canvas.addEventListener("pointerup", stop);
    this.canvas.addEventListener("pointercancel", stop);

    this.canvas.addEventListener(
      "wheel",
      (event) => {
        event.preventDefault();
        this.state = applyZoom(this.state, Math.sign(event.deltaY) * 5);
        this.updateStatus();
      },
      { passive: false },
    );

    window.addEventListener("keydown", (event) => {
      const step = 5;
      if (event.key === "ArrowLeft") this.state = applyDrag(this.state, -step, 0);
      else if (event.key === "ArrowRight") this.state = applyDrag(this.state, step, 0);
      else if (event.key === "ArrowUp") this.state = applyDrag(this.state, 0, step);
      else if (event.key === "ArrowDown") this.state = applyDrag(this.state, 0, -step);
      else if (event.key === "+") this.state = applyZoom(this.state, -5);
      else if (event.key === "-") this.state = applyZoom(this.state, 5);
      else return;
      this.updateStatus();
    });
  }
}

async function boot(): Promise<void> {
  const canvas = document.getElementById("pano") as HTMLCanvasElement | null;
  const overlay = document.getElementById("hotspots");
  const status = document.getElementById("status");
  const badge = document.getElementById("badge");
  if (!canvas || !overlay || !status || !badge) {
    showError("viewer markup incomplete", "index.html is missing required elements");
    return;
  }

  const tourParam = new URLSearchParams(window.location.search).get("tour") ?? DEFAULT_TOUR_URL;
  const tourUrl = new URL(tourParam, window.location.href);

  let parsed: unknown;
  try {
    const response = await fetch(tourUrl);
    if (!response.ok) {
      showError("tour not reachable", `${tourUrl.pathname}: HTTP ${response.status}`);
      return;
    }
    parsed = await response.json();
  } catch (err) {
    showError("tour not readable", err instanceof Error ? err.message : String(err));
    return;
  }

  let tour: TourDocument;
  try {
    tour = validateTour(parsed);
  } catch (err) {
    if (err instanceof TourSchemaError) {
      showError("tour.json failed validation", `at ${err.path}: ${err.message}`);
    } else {
      showError("tour.json failed validation", err instanceof Error ? err.message : String(err));
    }
    return;
  }

  try {
    const app = new ViewerApp(canvas, tour, tourUrl, overlay, status, badge);
    await app.start();
  } catch (err) {
    showError("viewer failed to start", err instanceof Error ? err.message : String(err));
  }
}

void boot();
