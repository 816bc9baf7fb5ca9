#!/usr/bin/env python3
"""Regenerates the bundled fixtures under data/.

The fixtures are committed; this script only documents how they were made.
Requires numpy and scikit-learn.
"""
import csv
import pathlib

import numpy as np
from sklearn.datasets import load_iris
from sklearn.manifold import TSNE
from sklearn.preprocessing import StandardScaler

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def write_embedding(path, coords):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for x, y in coords:
            w.writerow([f"{x:.6f}", f"{y:.6f}"])


def iris():
    ds = load_iris()
    names = ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    with open(DATA / "iris.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names + ["species"])
        for row, t in zip(ds.data, ds.target):
            w.writerow([f"{v:.1f}" for v in row] + [ds.target_names[t]])
    x = StandardScaler().fit_transform(ds.data)
    emb = TSNE(n_components=2, perplexity=30, init="pca", random_state=0).fit_transform(x)
    write_embedding(DATA / "iris_embedding.csv", emb)


def attrition_like(n=1470):
    rng = np.random.default_rng(7)
    depts = np.array(["Sales", "Research & Development", "Human Resources"])
    dept = rng.choice(3, size=n, p=[0.3, 0.65, 0.05])
    fields = {
        0: (["Marketing", "Life Sciences", "Medical"], [0.6, 0.25, 0.15]),
        1: (["Life Sciences", "Medical", "Technical Degree", "Other"], [0.45, 0.35, 0.12, 0.08]),
        2: (["Human Resources", "Life Sciences", "Medical"], [0.6, 0.2, 0.2]),
    }
    edu = np.array([rng.choice(fields[d][0], p=fields[d][1]) for d in dept])
    level = np.clip(np.round(rng.gamma(2.0, 0.9, size=n)) + 1, 1, 5).astype(int)
    years = np.clip(level * 4.5 + rng.normal(0, 3, size=n), 0, 40)
    income = 1500 + level * 3200 + rng.normal(0, 900, size=n)
    age = np.clip(20 + years * 0.9 + rng.normal(0, 4, size=n), 18, 60)
    overtime = rng.random(n) < 0.28
    travel_levels = ["Non-Travel", "Travel_Rarely", "Travel_Frequently"]
    travel = rng.choice(3, size=n, p=[0.1, 0.7, 0.2])
    attr_p = 0.08 + 0.2 * overtime + 0.1 * (level == 1)
    attrition = rng.random(n) < attr_p
    missing = rng.random(n) < 0.04

    feats = np.column_stack([
        np.eye(3)[dept] * 3.0,
        (edu[:, None] == np.unique(edu)[None, :]) * 1.5,
        StandardScaler().fit_transform(np.column_stack([level, years, income, age])),
        overtime[:, None] * 1.0,
    ])
    emb = TSNE(n_components=2, perplexity=30, init="pca", random_state=0).fit_transform(feats)

    with open(DATA / "attrition_like.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["Age", "Department", "EducationField", "JobLevel", "TotalWorkingYears",
                    "MonthlyIncome", "OverTime", "BusinessTravel", "Attrition"])
        for i in range(n):
            w.writerow([
                f"{age[i]:.0f}",
                depts[dept[i]],
                edu[i],
                "" if missing[i] else str(level[i]),
                "" if missing[i] else f"{years[i]:.0f}",
                f"{income[i]:.0f}",
                "Yes" if overtime[i] else "No",
                travel_levels[travel[i]],
                "Yes" if attrition[i] else "No",
            ])
    write_embedding(DATA / "attrition_like_embedding.csv", emb)
    with open(DATA / "attrition_like.schema", "w") as fh:
        fh.write("# column = kind [: ordered categories]\n")
        fh.write("JobLevel = ordinal: 1, 2, 3, 4, 5\n")
        fh.write("BusinessTravel = ordinal: Non-Travel, Travel_Rarely, Travel_Frequently\n")


if __name__ == "__main__":
    DATA.mkdir(exist_ok=True)
    iris()
    attrition_like()
