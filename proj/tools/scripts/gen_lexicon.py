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
"""Regenerates kb/lexicon/dictionary.txt and stopwords.txt.

The dictionary is the most frequent English words (wordfreq) plus every word
of the clinical vocabulary and a list of medical terms. Frequencies are
Zipf values scaled by 100; medical words get a fixed boost so that spelling
correction prefers them over common words at equal distance.
"""

import argparse
import pathlib

from wordfreq import top_n_list, zipf_frequency

STOPWORDS = """
a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during
each few for from further had has have having he her here hers herself him
himself his how i if in into is it its itself just me more most my myself no nor
not now of off on once only or other our ours ourselves out over own same she
should so some such than that the their theirs them themselves then there these
they this those through to too under until up very was we were what when where
which while who whom why will with would you your yours yourself yourselves
also since patient's reports reported noted complains complaining presents
presented
""".split()

MEDICAL = """
fever febrile pyrexia chills rigors shivering recurrent intermittent headache
severe nausea vomiting joint joints pain pains arthralgia muscle myalgia
hemorrhagic haemorrhagic manifestations bleeding gums nose rash skin mild
infection neck stiffness stiff elephantiasis hydrocele lymphoedema lymphedema
swelling legs anaemia anemia dry weakness fatigue weight loss appetite rapid
weak pulse narrow pressure cold clammy malaria dengue chikungunya filaria
filariasis lymphatic kala azar encephalitis japanese mosquito mosquitoes sand
fly flies vector vectors microscopy microscopic smear slide blood test tests
diagnostic diagnosis rdt elisa aspiration serological serology nat primaquine
chloroquine artemether lumefantrine artesunate sulfadoxine pyrimethamine
amphotericin liposomal injection medicine dose doses treatment symptomatic
hospital clinic admitted admission examination examined positive negative
vivax falciparum parasite parasites spleen splenomegaly liver jaundice
dehydration shock syndrome platelet platelets count abdominal cough
""".split()

BOOST = 600


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument("--out", default="kb/lexicon")
  parser.add_argument("--top", type=int, default=3000)
  args = parser.parse_args()
  out = pathlib.Path(args.out)

  stop = sorted(set(STOPWORDS))
  freq = {}
  for word in top_n_list("en", args.top):
    if word.isalpha() and word.isascii():
      freq[word] = round(zipf_frequency(word, "en") * 100)
  for word in stop:
    freq[word] = round(zipf_frequency(word, "en") * 100)
  for line in (out / "vocabulary.tsv").read_text().splitlines():
    if line and not line.startswith("#"):
      for word in line.split("\t")[0].split():
        if word not in stop:
          freq[word] = round(zipf_frequency(word, "en") * 100) + BOOST
  for word in MEDICAL:
    freq[word] = round(zipf_frequency(word, "en") * 100) + BOOST

  with open(out / "dictionary.txt", "w") as f:
    f.write("# word\tfrequency\n")
    for word in sorted(freq):
      f.write(f"{word}\t{freq[word]}\n")
  with open(out / "stopwords.txt", "w") as f:
    f.write("\n".join(stop) + "\n")


if __name__ == "__main__":
  main()
