#!/usr/bin/env python3
# Copyright 2026 The qsent Authors.
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

"""Writes the bundled knowledge base (default.vars, default.rules).

The nine expert rules are copied as given; everything tagged
source=completion is generated here from their patterns.
"""

import argparse
import pathlib

VERSION = "0.3.0"
DRUGS = ["Lovastatin", "Pravastatin", "Simvastatin", "Atorvastatin",
         "Rosuvastatin", "Niacin"]
LIPIDS = ["CHOLESTEROL", "LDL", "HDL", "TRIGLYCERIDE"]
DOWN_LIPIDS = ["CHOLESTEROL", "LDL", "TRIGLYCERIDE"]

LEVELS = ["Optimal", "Slightly_Increased", "Medium_Increased",
          "Highly_Increased"]


def band(cuts, lo, hi, half):
    """Trapezoids with +-half overlap bands around each cut point."""
    pts = []
    edges = [lo] + cuts + [hi]
    for i in range(len(edges) - 1):
        a = edges[i] - half if i > 0 else lo
        b = edges[i] + half if i > 0 else lo
        c = edges[i + 1] - half if i + 1 < len(edges) - 1 else hi
        d = edges[i + 1] + half if i + 1 < len(edges) - 1 else hi
        pts.append((a, b, c, d))
    return pts


def fmt(x):
    return str(int(x)) if float(x).is_integer() else repr(x)


def sets_block(names, traps):
    return "".join(
        f"  set {n} trapezoid {' '.join(fmt(v) for v in t)}\n"
        for n, t in zip(names, traps))


LEVEL_VARS = {
    "CHOLESTEROL": (1000, [200, 240, 300]),
    "LDL": (1000, [100, 130, 160]),
    "TRIGLYCERIDE": (2000, [150, 200, 500]),
}

FIVE = ["Very_Low", "Low", "Medium", "High", "Very_High"]
THREE = ["Low", "Medium", "High"]


def variables():
    out = [f"version {VERSION}\n",
           "# Output and shared inputs.\n",
           "var Sentiment universe -1 1\n",
           sets_block(["Negative", "Neutral", "Positive"],
                      [(-1, -1, -0.5, -0.1), (-0.3, -0.05, 0.05, 0.3),
                       (0.1, 0.5, 1, 1)]),
           "\n# 1 when the change moves the term toward its healthy range.\n",
           "var Direction universe 0 1\n",
           sets_block(["Worsening", "Improving"],
                      [(0, 0, 0.5, 0.5), (0.5, 0.5, 1, 1)]),
           "\n# Days on the drug.\n",
           "var Duration universe 0 3650\n",
           sets_block(["Incomplete", "Complete"],
                      [(0, 0, 21, 28), (21, 28, 3650, 3650)]),
           "\n# Daily dose in mg.\n",
           "var Drug_Dosage universe 0 4000\n",
           sets_block(["Low", "Medium", "High", "Very_High"],
                      [(0, 0, 300, 400), (300, 400, 900, 1100),
                       (900, 1100, 1900, 2100), (1900, 2100, 4000, 4000)]),
           ]

    out.append("\n# Lipid levels in mg/dl.\n")
    for term, (hi, cuts) in LEVEL_VARS.items():
        for role in ["firstValue", "secondValue", "finalValue"]:
            out.append(f"var {term}_{role} universe 0 {hi}\n")
            out.append(sets_block(LEVELS, band(cuts, 0, hi, 5)))
    for role in ["firstValue", "secondValue", "finalValue"]:
        out.append(f"var HDL_{role} universe 0 200\n")
        out.append(sets_block(["Low", "Medium", "Optimal"],
                              band([40, 60], 0, 200, 3)))

    out.append("\n# Drug taken, as a category. Inputs use the plateau centre.\n")
    for term in LIPIDS:
        out.append(f"var {term}_DRUG universe 0.5 {len(DRUGS) + 0.5}\n")
        out.append(sets_block(
            DRUGS, [(i + 0.5, i + 0.5, i + 1.5, i + 1.5)
                    for i in range(len(DRUGS))]))

    amount = band([10, 30, 60, 100], 0, 1000, 5)
    amount_tg = band([10, 30, 60, 100], 0, 2000, 5)
    percent = band([5, 15, 25, 40], 0, 1000, 3)
    hdl_amount = [(0, 0, 3, 7), (3, 7, 12, 18), (12, 18, 200, 200)]
    hdl_percent = [(0, 0, 7, 13), (7, 13, 22, 28), (22, 28, 1000, 1000)]

    def family(template, hi, terms, names, traps, drugs=True):
        s = f"family {template} universe 0 {hi}\n"
        s += f"  terms {' '.join(terms)}\n"
        if drugs:
            s += f"  drugs {' '.join(DRUGS)}\n"
        return s + sets_block(names, traps)

    out.append("\n# Size of a change, in mg/dl and in percent of the first "
               "value.\n")
    for template, drugs in [("TERM_Change", False), ("TERM_DRUG_Change", True)]:
        out.append(family(template, 1000, ["CHOLESTEROL", "LDL"], FIVE, amount,
                          drugs))
        out.append(family(template, 2000, ["TRIGLYCERIDE"], FIVE, amount_tg,
                          drugs))
        out.append(family(template, 200, ["HDL"], THREE, hdl_amount, drugs))
    for template, drugs in [("TERM_Percent_Change", False),
                            ("TERM_DRUG_Percent_Change", True)]:
        out.append(family(template, 1000, DOWN_LIPIDS, FIVE, percent, drugs))
        out.append(family(template, 1000, ["HDL"], THREE, hdl_percent, drugs))

    out.append("\n# Body weight change in lbs and percent.\n")
    out.append("var WEIGHT_Change universe 0 500\n")
    out.append(sets_block(THREE, [(0, 0, 3, 7), (3, 7, 15, 25),
                                  (15, 25, 500, 500)]))
    out.append("var WEIGHT_Percent_Change universe 0 100\n")
    out.append(sets_block(THREE, [(0, 0, 1, 3), (1, 3, 8, 12),
                                  (8, 12, 100, 100)]))
    return "".join(out)


EXPERT = [
    ("1", [("CHOLESTEROL_DRUG", "Niacin"), ("Duration", "Complete"),
           ("CHOLESTEROL_Niacin_Change", "Medium")], "Neutral"),
    ("2", [("CHOLESTEROL_DRUG", "Niacin"), ("Duration", "Complete"),
           ("CHOLESTEROL_Niacin_Change", "High")], "Positive"),
    ("3", [("CHOLESTEROL_finalValue", "Optimal")], "Positive"),
    ("4", [("CHOLESTEROL_finalValue", "Highly_Increased")], "Negative"),
    ("5", [("CHOLESTEROL_finalValue", "Medium_Increased")], "Neutral"),
    ("6", [("CHOLESTEROL_DRUG", "Simvastatin"), ("Drug_Dosage", "High"),
           ("Duration", "Complete"),
           ("CHOLESTEROL_Simvastatin_Percent_Change", "Medium")], "Neutral"),
    ("7", [("CHOLESTEROL_DRUG", "Atorvastatin"), ("Drug_Dosage", "High"),
           ("Duration", "Complete"),
           ("CHOLESTEROL_Atorvastatin_Change", "very_Low")], "Negative"),
    ("8", [("LDL_DRUG", "Simvastatin"), ("Duration", "Complete"),
           ("Drug_Dosage", "High"), ("LDL_Simvastatin_Change", "Medium")],
     "Neutral"),
    ("9", [("CHOLESTEROL_firstValue", "Highly_Increased"),
           ("CHOLESTEROL_secondValue", "Highly_Increased"),
           ("CHOLESTEROL_DRUG", "Simvastatin"), ("Drug_Dosage", "High"),
           ("Duration", "Complete"),
           ("CHOLESTEROL_Simvastatin_Change", "very High")], "Positive"),
]


def rule_line(rid, source, conds, out):
    body = " AND ".join(f"{v} IS {s.replace(' ', '_')}" for v, s in conds)
    return f"rule {rid} source={source}: IF {body} THEN Sentiment IS {out}\n"


def completions():
    rules = []

    def add(rid, conds, out):
        rules.append((rid, conds, out))

    # Final values, mirroring rules 3-5.
    for term in ["LDL", "TRIGLYCERIDE"]:
        add(f"final-{term}-Optimal", [(f"{term}_finalValue", "Optimal")],
            "Positive")
        add(f"final-{term}-Highly_Increased",
            [(f"{term}_finalValue", "Highly_Increased")], "Negative")
        add(f"final-{term}-Medium_Increased",
            [(f"{term}_finalValue", "Medium_Increased")], "Neutral")
    add("final-HDL-Optimal", [("HDL_finalValue", "Optimal")], "Positive")
    add("final-HDL-Low", [("HDL_finalValue", "Low")], "Negative")
    add("final-HDL-Medium", [("HDL_finalValue", "Medium")], "Neutral")

    # Direction-aware change size, any drug.
    for term in LIPIDS + ["WEIGHT"]:
        names = THREE if term in ("HDL", "WEIGHT") else FIVE
        for kind in ["Change", "Percent_Change"]:
            for i, s in enumerate(names):
                tiny = i == 0
                add(f"change-{term}-{kind}-Improving-{s}",
                    [("Direction", "Improving"), (f"{term}_{kind}", s)],
                    "Neutral" if tiny else "Positive")
                add(f"change-{term}-{kind}-Worsening-{s}",
                    [("Direction", "Worsening"), (f"{term}_{kind}", s)],
                    "Neutral" if tiny else "Negative")

    # Starting level plus direction, for readings without a second value.
    for term in DOWN_LIPIDS:
        for level in LEVELS[1:]:
            add(f"start-{term}-{level}-Improving",
                [(f"{term}_firstValue", level), ("Direction", "Improving")],
                "Positive")
        for level in LEVELS[2:]:
            add(f"start-{term}-{level}-Worsening",
                [(f"{term}_firstValue", level), ("Direction", "Worsening")],
                "Negative")
    add("start-HDL-Low-Improving",
        [("HDL_firstValue", "Low"), ("Direction", "Improving")], "Positive")
    add("start-HDL-Medium-Improving",
        [("HDL_firstValue", "Medium"), ("Direction", "Improving")], "Positive")
    add("start-HDL-Low-Worsening",
        [("HDL_firstValue", "Low"), ("Direction", "Worsening")], "Negative")

    # The expert rule patterns over every lipid and drug.
    def key(conds):
        return tuple(sorted((v.lower(), s.replace(" ", "_").lower())
                            for v, s in conds))

    expert = {key(c) for _, c, _ in EXPERT}
    for term in LIPIDS:
        hdl = term == "HDL"
        tiny = "Low" if hdl else "Very_Low"
        huge = "High" if hdl else "Very_High"
        bad = "Low" if hdl else "Highly_Increased"
        for drug in DRUGS:
            d = [(f"{term}_DRUG", drug)]
            chg = f"{term}_{drug}_Change"
            pct = f"{term}_{drug}_Percent_Change"
            full = [("Drug_Dosage", "High"), ("Duration", "Complete")]
            candidates = [
                ("niacin-medium", d + [("Duration", "Complete"),
                                       (chg, "Medium")], "Neutral"),
                ("niacin-high", d + [("Duration", "Complete"), (chg, "High")],
                 "Positive"),
                ("dose-percent-medium", d + full + [(pct, "Medium")],
                 "Neutral"),
                ("dose-tiny", d + full + [(chg, tiny)], "Negative"),
                ("dose-medium", d + full + [(chg, "Medium")], "Neutral"),
                ("dose-huge-from-high",
                 [(f"{term}_firstValue", bad), (f"{term}_secondValue", bad)] +
                 d + full + [(chg, huge)], "Positive"),
            ]
            for name, conds, out in candidates:
                if key(conds) in expert:
                    continue
                add(f"{name}-{term}-{drug}", conds, out)
    return rules


def rules_text():
    out = ["# Expert rules.\n"]
    for rid, conds, res in EXPERT:
        out.append(rule_line(rid, "expert", conds, res))
    out.append("\n# Completions generated from the expert rule patterns.\n")
    for rid, conds, res in completions():
        out.append(rule_line(rid, "completion", conds, res))
    return "".join(out)


def main():
    here = pathlib.Path(__file__).resolve().parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=here.parent / "core" / "data" / "kb")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "default.vars").write_text(variables())
    (args.out / "default.rules").write_text(rules_text())


if __name__ == "__main__":
    main()
