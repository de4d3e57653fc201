#!/usr/bin/env python3
"""Fetch the benchmark datasets and write them as clean CSV files.

The UCI repository is not always reachable, so the datasets are pulled from
PyPI wheels that redistribute the original UCI files:

  german     responsibly    german.data (Statlog German credit, 1000 x 20)
  heart      Orange3        heart_disease.tab (Cleveland, 303 x 13)
  satellite  imbalanced-databases  sat.trn + sat.tst (Statlog Landsat, 6435 x 36)
  adult      responsibly    adult.data + adult.test (45222 x 14 after dropping '?')
  shuttle    keel-ds        shuttle-2_vs_5 (KEEL subset of Statlog shuttle, 3316 x 9)
  kddcup99   keel-ds        three KEEL kddcup subsets merged (4936 x 41, 6 attacks)

Satellite uses the two-class labelling of the outlier-detection benchmark
(classes 2, 4 and 5 form the minority class). Shuttle and kddcup99 are real
subsets of the original records, not the full files.

Every output CSV has a header row and a final column named "class".

Usage: fetch_datasets.py [--out DIR] [--wheels DIR]
"""

import argparse
import csv
import glob
import io
import os
import subprocess
import sys
import tempfile
import zipfile

PACKAGES = {
    "responsibly": "responsibly==0.1.2",
    "orange": "Orange3==3.38.1",
    "imbalanced": "imbalanced-databases==0.1.1",
    "keel": "keel-ds==0.2.5",
}

GERMAN_COLUMNS = [
    "checking_status", "duration", "credit_history", "purpose", "credit_amount",
    "savings_status", "employment", "installment_commitment", "personal_status",
    "other_parties", "residence_since", "property_magnitude", "age",
    "other_payment_plans", "housing", "existing_credits", "job", "num_dependents",
    "own_telephone", "foreign_worker",
]

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num", "marital_status",
    "occupation", "relationship", "race", "sex", "capital_gain", "capital_loss",
    "hours_per_week", "native_country",
]

KDD_COLUMNS = [
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
    "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
]

# (file stem, positive class, negative class)
KDD_SUBSETS = [
    ("kddcup-buffer_overflow_vs_back", "buffer_overflow", "back"),
    ("kddcup-guess_passwd_vs_satan", "guess_passwd", "satan"),
    ("kddcup-land_vs_portsweep", "land", "portsweep"),
]


def download(spec, dest):
    os.makedirs(dest, exist_ok=True)
    found = glob.glob(os.path.join(dest, "*.whl"))
    if found:
        return found[0]
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
         "--python-version", "3.10", "--platform", "manylinux2014_x86_64",
         "-q", "-d", dest, spec],
        check=True)
    return glob.glob(os.path.join(dest, "*.whl"))[0]


def read_member(wheel, name):
    with zipfile.ZipFile(wheel) as z:
        return z.read(name).decode("utf-8")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}: {len(rows)} rows, {len(header) - 1} features")


def german(wheels, out):
    text = read_member(wheels["responsibly"], "responsibly/dataset/german/german.data")
    rows = []
    for line in text.splitlines():
        fields = line.split()
        if not fields:
            continue
        label = "good" if fields[-1] == "1" else "bad"
        rows.append(fields[:-1] + [label])
    write_csv(os.path.join(out, "german.csv"), GERMAN_COLUMNS + ["class"], rows)


def heart(wheels, out):
    text = read_member(wheels["orange"], "Orange/datasets/heart_disease.tab")
    lines = text.splitlines()
    names = [n.strip().replace(" ", "_").replace(">", "gt").lower()
             for n in lines[0].split("\t")]
    header = names[:-1] + ["class"]
    rows = []
    for line in lines[3:]:
        if not line.strip():
            continue
        fields = [v.strip() for v in line.split("\t")]
        fields = ["?" if v == "" else v for v in fields]
        rows.append(fields)
    write_csv(os.path.join(out, "heart.csv"), header, rows)


def satellite(wheels, out):
    rows = []
    for part in ("sat.trn.txt", "sat.tst.txt"):
        text = read_member(wheels["imbalanced"], f"imbalanced_databases/data/satimage/{part}")
        for line in text.splitlines():
            fields = line.split()
            if not fields:
                continue
            label = "outlier" if fields[-1] in ("2", "4", "5") else "inlier"
            rows.append(fields[:-1] + [label])
    header = [f"band_{i + 1}" for i in range(36)] + ["class"]
    write_csv(os.path.join(out, "satellite.csv"), header, rows)


def adult(wheels, out):
    rows = []
    for part in ("adult.data", "adult.test"):
        text = read_member(wheels["responsibly"], f"responsibly/dataset/adult/{part}")
        for line in text.splitlines():
            if not line.strip() or line.startswith("|"):
                continue
            fields = [v.strip() for v in line.split(",")]
            if len(fields) != 15 or "?" in fields:
                continue
            fields[-1] = fields[-1].rstrip(".")
            rows.append(fields)
    write_csv(os.path.join(out, "adult.csv"), ADULT_COLUMNS + ["class"], rows)


def shuttle(wheels, out):
    text = read_member(wheels["keel"], "keel_ds/data/imbalanced/raw/shuttle-2_vs_5.dat")
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        fields = [v.strip() for v in line.split(",")]
        rows.append(fields)
    header = [f"a{i + 1}" for i in range(len(rows[0]) - 1)] + ["class"]
    write_csv(os.path.join(out, "shuttle.csv"), header, rows)


def kddcup(wheels, out):
    rows = []
    for stem, positive, negative in KDD_SUBSETS:
        text = read_member(wheels["keel"], f"keel_ds/data/imbalanced/raw/{stem}.dat")
        for line in text.splitlines():
            if not line.strip() or line.startswith("@"):
                continue
            fields = [v.strip() for v in line.split(",")]
            fields[-1] = positive if fields[-1] == "positive" else negative
            rows.append(fields)
    write_csv(os.path.join(out, "kddcup99.csv"), KDD_COLUMNS + ["class"], rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    here = os.path.dirname(os.path.abspath(__file__))
    parser.add_argument("--out", default=os.path.join(here, "..", "data"))
    parser.add_argument("--wheels", default=None,
                        help="directory holding (or receiving) the downloaded wheels")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    cache = args.wheels or tempfile.mkdtemp(prefix="cubeproto-wheels-")
    wheels = {key: download(spec, os.path.join(cache, key)) for key, spec in PACKAGES.items()}

    german(wheels, args.out)
    heart(wheels, args.out)
    satellite(wheels, args.out)
    adult(wheels, args.out)
    shuttle(wheels, args.out)
    kddcup(wheels, args.out)


if __name__ == "__main__":
    main()
