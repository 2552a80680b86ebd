#!/usr/bin/env python3
"""Regenerates reference.json and lab_map.json in this directory."""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent


def card(eid, kind, model, node, shelf, slot):
    return {"id": eid, "kind": kind, "model": model, "node": node, "shelf": shelf, "slot": slot}


def span(eid, a, b):
    return {"id": eid, "kind": "FIBER_SPAN", "model": "SSMF", "node": f"{a}-{b}"}


def topology():
    el = [
        # TN1 shelf S1: the shelf shown to the card identifier.
        card("TN1/S1/1/OT", "OT", "D5X500Q", "TN1", "TN1/S1", 1),
        card("TN1/S1/2/LA", "LA", "ASWG", "TN1", "TN1/S1", 2),
        card("TN1/S1/3/LA", "LA", "ASWG", "TN1", "TN1/S1", 3),
        card("TN1/S1/4/LA", "LA", "ASWG", "TN1", "TN1/S1", 4),
        card("TN1/S1/5/LA", "LA", "ASWG", "TN1", "TN1/S1", 5),
        # TN1 shelf S2: add/drop and switching.
        card("TN1/S2/1/OT", "OT", "CARD-T03", "TN1", "TN1/S2", 1),
        card("TN1/S2/2/MCS", "MCS", "CARD-T04", "TN1", "TN1/S2", 2),
        card("TN1/S2/3/AA", "AA", "CARD-T05", "TN1", "TN1/S2", 3),
        card("TN1/S2/4/WSS", "WSS", "CARD-T06", "TN1", "TN1/S2", 4),
        card("TN1/S2/5/WSS", "WSS", "CARD-T06", "TN1", "TN1/S2", 5),
        # TN5: in-line amplifier site between TN1 and TN2.
        card("TN5/S1/1/LA", "LA", "CARD-T07", "TN5", "TN5/S1", 1),
        # TN2: WL1 drop.
        card("TN2/S1/1/LA", "LA", "ASWG", "TN2", "TN2/S1", 1),
        card("TN2/S1/2/WSS", "WSS", "CARD-T06", "TN2", "TN2/S1", 2),
        card("TN2/S1/3/MCS", "MCS", "CARD-T04", "TN2", "TN2/S1", 3),
        card("TN2/S1/4/OT", "OT", "CARD-T08", "TN2", "TN2/S1", 4),
        # TN3: express ROADM on WL2.
        card("TN3/S1/1/LA", "LA", "CARD-T07", "TN3", "TN3/S1", 1),
        card("TN3/S1/2/WSS", "WSS", "CARD-T09", "TN3", "TN3/S1", 2),
        card("TN3/S1/3/WSS", "WSS", "CARD-T09", "TN3", "TN3/S1", 3),
        card("TN3/S1/4/LA", "LA", "CARD-T07", "TN3", "TN3/S1", 4),
        # TN4: WL2 drop.
        card("TN4/S1/1/LA", "LA", "ASWG", "TN4", "TN4/S1", 1),
        card("TN4/S1/2/WSS", "WSS", "CARD-T06", "TN4", "TN4/S1", 2),
        card("TN4/S1/3/MCS", "MCS", "CARD-T10", "TN4", "TN4/S1", 3),
        card("TN4/S1/4/OT", "OT", "CARD-T11", "TN4", "TN4/S1", 4),
        # TN6: degree reached from TN4, idle in this scenario.
        card("TN6/S1/1/LA", "LA", "ASWG", "TN6", "TN6/S1", 1),
        card("TN6/S1/2/WSS", "WSS", "CARD-T06", "TN6", "TN6/S1", 2),
        span("SPAN/TN1-TN5", "TN1", "TN5"),
        span("SPAN/TN5-TN2", "TN5", "TN2"),
        span("SPAN/TN1-TN3", "TN1", "TN3"),
        span("SPAN/TN3-TN4", "TN3", "TN4"),
        span("SPAN/TN4-TN6", "TN4", "TN6"),
    ]
    wl1 = ["TN1/S2/1/OT", "TN1/S2/2/MCS", "TN1/S2/3/AA", "TN1/S2/4/WSS", "TN1/S1/2/LA", "SPAN/TN1-TN5",
           "TN5/S1/1/LA", "SPAN/TN5-TN2", "TN2/S1/1/LA", "TN2/S1/2/WSS", "TN2/S1/3/MCS", "TN2/S1/4/OT"]
    wl2 = ["TN1/S1/1/OT", "TN1/S2/2/MCS", "TN1/S2/3/AA", "TN1/S2/5/WSS", "TN1/S1/5/LA", "SPAN/TN1-TN3",
           "TN3/S1/1/LA", "TN3/S1/2/WSS", "TN3/S1/3/WSS", "TN3/S1/4/LA", "SPAN/TN3-TN4", "TN4/S1/1/LA",
           "TN4/S1/2/WSS", "TN4/S1/3/MCS", "TN4/S1/4/OT"]
    edges = []
    for route in (wl1, wl2):
        edges += [[a, b] for a, b in zip(route, route[1:])]
    edges += [["TN4/S1/2/WSS", "SPAN/TN4-TN6"], ["SPAN/TN4-TN6", "TN6/S1/1/LA"], ["TN6/S1/1/LA", "TN6/S1/2/WSS"]]
    paths = [
        {"id": "WL1", "route": wl1, "line_rate_gbps": 200},
        {"id": "WL2", "route": wl2, "line_rate_gbps": 200},
    ]
    lengths = {"SPAN/TN1-TN5": 40.0, "SPAN/TN5-TN2": 46.0, "SPAN/TN1-TN3": 35.0,
               "SPAN/TN3-TN4": 52.0, "SPAN/TN4-TN6": 28.0}
    return el, edges, paths, lengths


def lab_map():
    res, nx, ny, nz = 0.1, 120, 80, 20
    occ = set()

    def box(x0, x1, y0, y1, z0, z1):
        for ix in range(x0, x1):
            for iy in range(y0, y1):
                for iz in range(z0, z1):
                    occ.add((ix, iy, iz))

    box(0, nx, 0, ny, 0, 1)  # floor
    box(0, nx, 0, 1, 0, nz)  # outer walls
    box(0, nx, ny - 1, ny, 0, nz)
    box(0, 1, 0, ny, 0, nz)
    box(nx - 1, nx, 0, ny, 0, nz)
    box(60, 62, 0, 55, 0, nz)  # partition with a doorway at its north end
    box(20, 40, 30, 42, 7, 8)  # table top
    for lx, ly in ((20, 30), (39, 30), (20, 41), (39, 41)):
        box(lx, lx + 1, ly, ly + 1, 0, 7)
    box(30, 110, 70, 72, 19, 20)  # overhead cable duct, above head height
    for rx in (72, 82, 92, 102):  # rack row, 0.6 m x 1.0 m each
        box(rx, rx + 6, 20, 30, 0, 20)
    return {
        "resolution_m": res,
        "dims": [nx, ny, nz],
        "origin_m": [0.0, 0.0, 0.0],
        "occupied": sorted([list(v) for v in occ]),
    }


def scenario():
    el, edges, paths, lengths = topology()
    return {
        "schema_version": 1,
        "name": "reference six-node lab",
        "elements": el,
        "edges": edges,
        "paths": paths,
        "fiber_lengths_km": lengths,
        "alarms": [
            {"element_id": "TN1/S1/1/OT", "text": "Loss of signal - card failure", "severity": "CRITICAL",
             "timestamp_ms": 1000},
            {"element_id": "TN1/S2/5/WSS", "text": "High BER detected", "severity": "MAJOR", "timestamp_ms": 1004},
            {"element_id": "TN1/S1/5/LA", "text": "Frame loss on line port", "severity": "MAJOR",
             "timestamp_ms": 1007},
        ],
        "envmap_ref": "lab_map.json",
        "points": {"P1": [1.05, 1.05], "P2": [4.05, 6.55], "P3": [6.55, 6.55], "P4": [9.55, 1.55]},
        "shelves": [
            {"id": "TN1/S1", "rack_point": "P4", "level": 1},
            {"id": "TN1/S2", "rack_point": "P4", "level": 0},
        ],
        "navigation": {"slab_m": [0.1, 1.8], "arrow_spacing_m": 1.0, "flag_heights_m": [0.6, 1.5],
                       "diagonal_rule": "no_corner_cutting"},
        "qos": {
            "link": {"capacity_gbps": 100, "length_km": 86, "per_km_delay_us": 5.0},
            "meter": {"enabled": True, "cbr_cap_gbps": 90, "burst_bytes": 15000},
            "flows": [
                {"flow_id": "ar", "class": "AR", "offered_gbps": 0.33, "packet_bytes": 1500},
                {"flow_id": "cbr", "class": "CBR", "offered_gbps": 100, "packet_bytes": 1500},
            ],
            "duration_s": 1.0,
            "seed": 1,
        },
        "layouts": [
            {"id": "tn1-shelf1", "shelves": ["TN1/S1"], "slots_per_shelf": 8, "jitter_sigma": 0.0,
             "default_confidence_floor": 0.6, "confidence_floor": {"D5X500Q": 0.85}},
            {"id": "tn1-rack", "shelves": ["TN1/S1", "TN1/S2"], "slots_per_shelf": 8, "jitter_sigma": 0.0,
             "default_confidence_floor": 0.6, "confidence_floor": {"D5X500Q": 0.85}},
        ],
    }


def main():
    (HERE / "reference.json").write_text(json.dumps(scenario(), indent=2) + "\n")
    (HERE / "lab_map.json").write_text(json.dumps(lab_map(), separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
