/** tour.json schema: types, validation, and graph lookups.
 *
 * The document is produced by the `triage tour` pipeline; the viewer treats
 * it as untrusted input and validates every field before rendering, so a
 * truncated upload or a hand-edited file fails with a pointed message
 * instead of a blank canvas.
 */

export interface TourNode {
  id: string;
  image: string;
  position: [number, number, number];
  missing?: boolean;
}

export interface TourEdge {
  from: string;
  to: string;
  yaw_deg: number;
  pitch_deg: number;
  distance: number;
  color: [number, number, number];
  size_px: number;
}

export interface TourDocument {
  version: number;
  units: string;
  nodes: TourNode[];
  edges: TourEdge[];
  generated: { max_neighbors: number; max_distance: number | null };
}

/** Validation failure; `path` names the offending field ("edges/3/yaw_deg"). */
export class TourSchemaError extends Error {
  readonly path: string;

  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "TourSchemaError";
    this.path = path;
  }
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function requireFinite(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new TourSchemaError(path, "expected a finite number");
  }
  return value;
}

function requireString(value: unknown, path: string): string {
  if (typeof value !== "string" || value.length === 0) {
    throw new TourSchemaError(path, "expected a non-empty string");
  }
  return value;
}

function requireVec3(value: unknown, path: string): [number, number, number] {
  if (!Array.isArray(value) || value.length !== 3) {
    throw new TourSchemaError(path, "expected an array of 3 numbers");
  }
  return [
    requireFinite(value[0], `${path}/0`),
    requireFinite(value[1], `${path}/1`),
    requireFinite(value[2], `${path}/2`),
  ];
}

function requireColor(value: unknown, path: string): [number, number, number] {
  if (!Array.isArray(value) || value.length !== 3) {
    throw new TourSchemaError(path, "expected an [r, g, b] array");
  }
  const rgb = value.map((channel, i) => {
    const n = requireFinite(channel, `${path}/${i}`);
    if (!Number.isInteger(n) || n < 0 || n > 255) {
      throw new TourSchemaError(`${path}/${i}`, "expected an integer in [0, 255]");
    }
    return n;
  });
  return [rgb[0]!, rgb[1]!, rgb[2]!];
}

/** Validate a parsed tour.json document, throwing TourSchemaError on the
 * first violation.  Returns the same object, now safely typed. */
export function validateTour(doc: unknown): TourDocument {
  if (!isRecord(doc)) {
    throw new TourSchemaError("(root)", "expected a JSON object");
  }
  if (doc.version !== 1) {
    throw new TourSchemaError("version", `unsupported version ${JSON.stringify(doc.version)}`);
  }
  const units = requireString(doc.units, "units");

  if (!Array.isArray(doc.nodes)) {
    throw new TourSchemaError("nodes", "expected an array");
  }
  if (doc.nodes.length === 0) {
    throw new TourSchemaError("nodes", "tour has no panoramas");
  }
  const ids = new Set<string>();
  const nodes = doc.nodes.map((raw, i) => {
    const path = `nodes/${i}`;
    if (!isRecord(raw)) throw new TourSchemaError(path, "expected an object");
    const id = requireString(raw.id, `${path}/id`);
    if (ids.has(id)) throw new TourSchemaError(`${path}/id`, `duplicate node id "${id}"`);
    ids.add(id);
    const node: TourNode = {
      id,
      image: requireString(raw.image, `${path}/image`),
      position: requireVec3(raw.position, `${path}/position`),
    };
    if (raw.missing !== undefined) {
      if (typeof raw.missing !== "boolean") {
        throw new TourSchemaError(`${path}/missing`, "expected a boolean");
      }
      node.missing = raw.missing;
    }
    return node;
  });

  if (!Array.isArray(doc.edges)) {
    throw new TourSchemaError("edges", "expected an array");
  }
  const edges = doc.edges.map((raw, i) => {
    const path = `edges/${i}`;
    if (!isRecord(raw)) throw new TourSchemaError(path, "expected an object");
    const from = requireString(raw.from, `${path}/from`);
    const to = requireString(raw.to, `${path}/to`);
    if (!ids.has(from)) throw new TourSchemaError(`${path}/from`, `unknown node "${from}"`);
    if (!ids.has(to)) throw new TourSchemaError(`${path}/to`, `unknown node "${to}"`);
    const yaw = requireFinite(raw.yaw_deg, `${path}/yaw_deg`);
    if (yaw <= -180 || yaw > 180) {
      throw new TourSchemaError(`${path}/yaw_deg`, "expected a value in (-180, 180]");
    }
    const pitch = requireFinite(raw.pitch_deg, `${path}/pitch_deg`);
    if (pitch < -90 || pitch > 90) {
      throw new TourSchemaError(`${path}/pitch_deg`, "expected a value in [-90, 90]");
    }
    const distance = requireFinite(raw.distance, `${path}/distance`);
    if (distance <= 0) {
      throw new TourSchemaError(`${path}/distance`, "expected a positive distance");
    }
    const size = requireFinite(raw.size_px, `${path}/size_px`);
    if (size <= 0) {
      throw new TourSchemaError(`${path}/size_px`, "expected a positive size");
    }
    return {
      from,
      to,
      yaw_deg: yaw,
      pitch_deg: pitch,
      distance,
      color: requireColor(raw.color, `${path}/color`),
      size_px: size,
    };
  });

  if (!isRecord(doc.generated)) {
    throw new TourSchemaError("generated", "expected an object");
  }
  const maxNeighbors = requireFinite(doc.generated.max_neighbors, "generated/max_neighbors");
  const maxDistance = doc.generated.max_distance;
  if (maxDistance !== null && (typeof maxDistance !== "number" || !Number.isFinite(maxDistance))) {
    throw new TourSchemaError("generated/max_distance", "expected a number or null");
  }

  return {
    version: 1,
    units,
    nodes,
    edges,
    generated: { max_neighbors: maxNeighbors, max_distance: maxDistance },
  };
}

/** Node lookup by id; validation guarantees ids are unique. */
export function nodeById(tour: TourDocument, id: string): TourNode {
  const node = tour.nodes.find((n) => n.id === id);
  if (!node) throw new Error(`node "${id}" not in tour`);
  return node;
}

/** Outgoing edges of a node, in document order. */
export function edgesFrom(tour: TourDocument, id: string): TourEdge[] {
  return tour.edges.filter((e) => e.from === id);
}

/** The reverse of an edge (to -> from), or undefined: the graph is directed
 * and k-nearest edges are not always mutual. */
export function reverseEdge(tour: TourDocument, edge: TourEdge): TourEdge | undefined {
  return tour.edges.find((e) => e.from === edge.to && e.to === edge.from);
}
