import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import {
  TourDocument,
  TourSchemaError,
  edgesFrom,
  nodeById,
  reverseEdge,
  validateTour,
} from "../src/tour.js";

const FIXTURE_URL = new URL("../fixtures/three-node-tour/tour.json", import.meta.url);

function fixtureDoc(): unknown {
  return JSON.parse(readFileSync(FIXTURE_URL, "utf8"));
}

/** Expect validation to fail at exactly this path. */
function expectRejects(doc: unknown, path: string): void {
  try {
    validateTour(doc);
  } catch (err) {
    expect(err).toBeInstanceOf(TourSchemaError);
    expect((err as TourSchemaError).path).toBe(path);
    return;
  }
  expect.unreachable(`expected validation to fail at ${path}`);
}

describe("validateTour", () => {
  it("accepts the generated fixture unchanged", () => {
    const tour = validateTour(fixtureDoc());
    expect(tour.version).toBe(1);
    expect(tour.units).toBe("reconstruction");
    expect(tour.nodes).toHaveLength(3);
    expect(tour.edges).toHaveLength(6);
    expect(tour.generated.max_neighbors).toBe(2);
    expect(tour.generated.max_distance).toBeNull();
  });

  it("rejects non-object roots", () => {
    expectRejects(null, "(root)");
    expectRejects([], "(root)");
    expectRejects("tour", "(root)");
  });

  it("rejects unsupported versions", () => {
    const doc = fixtureDoc() as Record<string, unknown>;
    doc.version = 2;
    expectRejects(doc, "version");
    delete doc.version;
    expectRejects(doc, "version");
  });

  it("rejects missing or empty units", () => {
    const doc = fixtureDoc() as Record<string, unknown>;
    doc.units = "";
    expectRejects(doc, "units");
  });

  it("rejects an empty node list", () => {
    const doc = fixtureDoc() as Record<string, unknown>;
    doc.nodes = [];
    expectRejects(doc, "nodes");
  });

  it("pinpoints a bad node position", () => {
    const doc = fixtureDoc() as { nodes: Record<string, unknown>[] };
    doc.nodes[1]!.position = [0, 1];
    expectRejects(doc, "nodes/1/position");
    doc.nodes[1]!.position = [0, 1, "x"];
    expectRejects(doc, "nodes/1/position/2");
  });

  it("rejects duplicate node ids", () => {
    const doc = fixtureDoc() as { nodes: Record<string, unknown>[] };
    doc.nodes[2]!.id = doc.nodes[0]!.id;
    expectRejects(doc, "nodes/2/id");
  });

  it("rejects a non-boolean missing flag", () => {
    const doc = fixtureDoc() as { nodes: Record<string, unknown>[] };
    doc.nodes[0]!.missing = "yes";
    expectRejects(doc, "nodes/0/missing");
  });

  it("pinpoints bad edge fields", () => {
    let doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    delete doc.edges[3]!.yaw_deg;
    expectRejects(doc, "edges/3/yaw_deg");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.yaw_deg = 181;
    expectRejects(doc, "edges/0/yaw_deg");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.pitch_deg = -91;
    expectRejects(doc, "edges/0/pitch_deg");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[2]!.distance = 0;
    expectRejects(doc, "edges/2/distance");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[1]!.size_px = -4;
    expectRejects(doc, "edges/1/size_px");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[1]!.to = "nowhere.png";
    expectRejects(doc, "edges/1/to");
  });

  it("pinpoints bad color channels", () => {
    let doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.color = [255, 0];
    expectRejects(doc, "edges/0/color");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.color = [255, 0, 300];
    expectRejects(doc, "edges/0/color/2");

    doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.color = [255, 0.5, 0];
    expectRejects(doc, "edges/0/color/1");
  });

  it("rejects non-finite numbers", () => {
    const doc = fixtureDoc() as { edges: Record<string, unknown>[] };
    doc.edges[0]!.distance = Number.NaN;
    expectRejects(doc, "edges/0/distance");
  });

  it("rejects a missing generated block", () => {
    const doc = fixtureDoc() as Record<string, unknown>;
    delete doc.generated;
    expectRejects(doc, "generated");
  });
});

describe("graph lookups", () => {
  const tour: TourDocument = validateTour(fixtureDoc());

  it("finds nodes by id", () => {
    expect(nodeById(tour, "pano_001.png").image).toBe("pano_001.png");
    expect(() => nodeById(tour, "absent")).toThrow(/not in tour/);
  });

  it("lists outgoing edges in document order", () => {
    const out = edgesFrom(tour, "pano_001.png");
    expect(out.map((e) => e.to)).toEqual(["pano_000.png", "pano_002.png"]);
  });

  it("resolves reverse edges when present", () => {
    const out = edgesFrom(tour, "pano_000.png")[0]!;
    const back = reverseEdge(tour, out);
    expect(back).toBeDefined();
    expect(back!.from).toBe(out.to);
    expect(back!.to).toBe(out.from);
  });

  it("returns undefined when the graph is not symmetric", () => {
    const asymmetric: TourDocument = {
      version: 1,
      units: "meters",
      nodes: [
        { id: "a", image: "a.png", position: [0, 0, 0] },
        { id: "b", image: "b.png", position: [1, 0, 0] },
      ],
      edges: [
        { from: "a", to: "b", yaw_deg: 90, pitch_deg: 0, distance: 1, color: [255, 0, 0], size_px: 30 },
      ],
      generated: { max_neighbors: 1, max_distance: null },
    };
    expect(reverseEdge(asymmetric, asymmetric.edges[0]!)).toBeUndefined();
  });
});
