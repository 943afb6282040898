// Copyright 2026 The VBD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VBD_METRICS_H_
#define VBD_METRICS_H_

#include <string>

#include "vbd/ontology.h"

namespace vbd {

// Schema and knowledge-base quality metrics. Every function throws
// UndefinedMetricError when its denominator is zero.

// RR = |Prop| / (|Subclass| + |Prop|), |Prop| = object + data properties.
double RelationshipRichness(const MetricCounts& counts);
// AR = |Attribute| / |Class|, |Attribute| = data properties.
double AttributeRichness(const MetricCounts& counts);
// CR = |Class with instance| / |Class|.
double ClassRichness(const MetricCounts& counts);
// AP = |Individual| / |Class|.
double AveragePopulation(const MetricCounts& counts);
// Represented-knowledge score, |rel| = object properties:
//   (rel*class*100 + (subclass+rel)*prop) / ((subclass+rel)*class)
double ScoreRk(const MetricCounts& counts);
// Base-knowledge score: (with_instance*100 + individuals) / class.
double ScoreBk(const MetricCounts& counts);

struct MetricsReport {
  double rr = 0;
  double ar = 0;
  double cr = 0;
  double ap = 0;
  double score_rk = 0;
  double score_bk = 0;
  MetricCounts inputs;
};

MetricsReport ComputeMetrics(const MetricCounts& counts);

// Two-decimal plain table, one metric per line.
std::string FormatMetricsTable(const MetricsReport& report);

}  // namespace vbd

#endif  // VBD_METRICS_H_
