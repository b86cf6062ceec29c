#!/usr/bin/env python3
# Copyright (c) 2026 The emics authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the scenario JSON files in this directory."""

import json
import math
import pathlib

RES = 0.1
HERE = pathlib.Path(__file__).resolve().parent


def grid(w, h, walls):
    cw, ch = round(w / RES), round(h / RES)
    cells = [["."] * cw for _ in range(ch)]

    def fill(x0, y0, x1, y1):
        eps = 1e-9
        for y in range(max(0, math.floor(y0 / RES + eps)), min(ch, math.ceil(y1 / RES - eps))):
            for x in range(max(0, math.floor(x0 / RES + eps)), min(cw, math.ceil(x1 / RES - eps))):
                cells[y][x] = "#"

    fill(0, 0, w, RES)
    fill(0, h - RES, w, h)
    fill(0, 0, RES, h)
    fill(w - RES, 0, w, h)
    for r in walls:
        fill(*r)
    return {
        "width": cw,
        "height": ch,
        "resolution": RES,
        "origin": {"x": 0.0, "y": 0.0, "theta": 0.0},
        "cells": ["".join(row) for row in cells],
    }


def rect(x0, y0, x1, y1):
    return {"minX": x0, "minY": y0, "maxX": x1, "maxY": y1}


def pose(x, y, theta=0.0):
    return {"x": x, "y": y, "theta": theta}


def profile(name, speed=1.0, noise=0.0, preferred="teleoperation", delay=1.0, override=0.0, seed=1):
    return {
        "name": name,
        "skill": {"speedFactor": speed, "headingNoiseSigma": noise},
        "switchEagerness": {"preferredLoa": preferred, "reactionDelay": delay},
        "overrideProbability": override,
        "seed": seed,
    }


# Office floor: a long lower hall split by a wall with a 1.9 m gap, an upper
# hall reached around the east end of the dividing wall.
OFFICE = grid(20.0, 10.0, [(0.0, 4.9, 15.0, 5.1), (9.9, 0.0, 10.1, 3.0)])
OFFICE_GOALS = [pose(18.0, 2.0), pose(18.0, 8.0), pose(2.0, 8.0)]


def scenario(sid, **kw):
    s = {
        "id": sid,
        "staticMap": OFFICE,
        "trueObstacles": [],
        "noiseRegions": [],
        "latencyRegions": [],
        "distractionWindows": [],
        "explorationPoints": [],
        "start": pose(1.5, 2.0),
        "goals": OFFICE_GOALS,
        "seed": 1,
        "tickRate": 10.0,
        "timeout": None,
        "profiles": {},
    }
    s.update(kw)
    return s


SCENARIOS = {
    "benign": scenario(
        "benign",
        profiles={
            "skilled": profile("skilled", noise=0.02, seed=3),
            "novice": profile("novice", speed=0.6, noise=0.05, seed=4),
        },
    ),
    "distracted_teleop": scenario(
        "distracted_teleop",
        distractionWindows=[
            {"startTime": 20.0, "region": None, "duration": 30.0},
            {"startTime": 70.0, "region": None, "duration": 30.0},
        ],
        profiles={"distracted": profile("distracted", noise=0.02, delay=4.0, seed=5)},
    ),
    "unmapped_box": scenario(
        "unmapped_box",
        staticMap=grid(14.0, 6.0, [(7.0, 0.0, 7.2, 2.4), (7.0, 3.6, 7.2, 6.0)]),
        trueObstacles=[rect(6.5, 2.4, 7.0, 2.9)],
        start=pose(1.0, 3.0),
        goals=[pose(13.0, 3.0)],
        profiles={
            "skilled": profile("skilled", noise=0.02, seed=6),
            "autonomy-first": profile("autonomy-first", preferred="autonomy", seed=6),
        },
    ),
    "noisy_hall": scenario(
        "noisy_hall",
        noiseRegions=[{"region": rect(11.0, 0.0, 20.0, 5.0), "sigma": 0.1}],
        latencyRegions=[{"region": rect(11.0, 5.0, 20.0, 10.0), "delay": 0.5}],
        explorationPoints=[{"point": pose(12.0, 9.0), "beforeGoal": 2, "dwell": 3.0}],
        profiles={
            "skilled": profile("skilled", noise=0.02, seed=7),
            "autonomy-first": profile("autonomy-first", preferred="autonomy", delay=1.0, seed=7),
        },
    ),
    "conflict": scenario(
        "conflict",
        profiles={
            "override-prone": profile("override-prone", speed=0.6, noise=0.02, delay=1.0, override=1.0, seed=8),
            "hesitant": profile("hesitant", speed=0.6, noise=0.02, delay=1.0, override=0.5, seed=8),
        },
    ),
}

if __name__ == "__main__":
    for name, s in SCENARIOS.items():
        (HERE / f"{name}.json").write_text(json.dumps(s, indent=2) + "\n")
