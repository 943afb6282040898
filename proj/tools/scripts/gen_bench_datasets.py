#!/usr/bin/env python3
# Copyright 2026 The vbd-dss Authors.
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
"""Writes the synthetic RDF medical datasets used by `vbd bench`.

Each dataset holds its own patients, areas and drug individuals, so the union
of the datasets is a disjoint union. Output is deterministic for a seed.
"""

import argparse
import pathlib
import random

HEADER = """@prefix : <http://example.org/vbd#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

"""

SIZES = (700, 1000, 1300, 1600)
NAMES = ("Asha", "Ravi", "Meena", "Suresh", "Pooja", "Anil", "Kavita", "Raju",
         "Sunita", "Vijay", "Geeta", "Manoj")
TESTS = ("Microscopic_Examination", "Monovalent_RDT", "Blood_Test",
         "ELISA_Test", "Aspiration_Test")
DRUGS = ("Primaquine", "ACT-AL", "ACT-SP", "Chloroquine")
AREAS = ("rural_area", "peri_urban_area", "domestic_area")


def dataset(index, size, rng):
  tag = f"d{index}"
  out = [HEADER]
  areas = []
  for a in range(max(4, size // 50)):
    iri = f":{tag}_area{a}"
    cls = rng.choice(AREAS)
    within = rng.random() < 0.5
    out.append(f"{iri} a :{cls} ; :is_ME_Result_Available_Within_One_Day "
               f"{'true' if within else 'false'} .\n")
    areas.append(iri)
  tests = []
  for t, cls in enumerate(TESTS):
    iri = f":{tag}_test{t}"
    out.append(f"{iri} a :{cls} .\n")
    tests.append(iri)
  drugs = []
  for d, cls in enumerate(DRUGS):
    iri = f":{tag}_drug{d}"
    out.append(f"{iri} a :{cls} .\n")
    drugs.append(iri)
  for i in range(size):
    p = f":{tag}_p{i}"
    facts = [f"{p} a :patient",
             f"{p} :has_Name \"{rng.choice(NAMES)} {i}\"",
             f"{p} :has_Age {rng.randint(1, 90)}",
             f"{p} :has_Gender \"{rng.choice(('male', 'female'))}\"",
             f"{p} :lives_In {rng.choice(areas)}"]
    if rng.random() < 0.6:
      facts.append(f"{p} :has_Fever true")
    if rng.random() < 0.5:
      facts.append(f"{p} :has_Headache {'true' if rng.random() < 0.8 else 'false'}")
    if rng.random() < 0.4:
      facts.append(f"{p} :undergoes {rng.choice(tests)}")
      facts.append(f"{p} :has_ME_Result "
                   f"\"{rng.choice(('positive', 'negative'))}\"")
    if rng.random() < 0.3:
      facts.append(f"{p} :has_RDT_Result "
                   f"\"{rng.choice(('positive', 'negative'))}\"")
    if rng.random() < 0.2:
      facts.append(f"{p} :is_Prescribed {rng.choice(drugs)}")
    out.extend(f + " .\n" for f in facts)
  return "".join(out)


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument("--out", default="kb/bench")
  parser.add_argument("--seed", type=int, default=20)
  args = parser.parse_args()
  out = pathlib.Path(args.out)
  out.mkdir(parents=True, exist_ok=True)
  rng = random.Random(args.seed)
  for i, size in enumerate(SIZES, start=1):
    (out / f"data{i}.ttl").write_text(dataset(i, size, rng))


if __name__ == "__main__":
  main()
