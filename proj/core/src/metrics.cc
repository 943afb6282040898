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

#include "vbd/metrics.h"

#include <cstdio>

#include "vbd/errors.h"

namespace vbd {

namespace {

double Ratio(double numerator, double denominator, const char* metric) {
  if (denominator == 0) {
    throw UndefinedMetricError(std::string(metric) +
                               " is undefined: zero denominator");
  }
  return numerator / denominator;
}

}  // namespace

double RelationshipRichness(const MetricCounts& counts) {
  double prop = static_cast<double>(counts.property_count());
  return Ratio(prop, static_cast<double>(counts.subclassof_count) + prop, "RR");
}

double AttributeRichness(const MetricCounts& counts) {
  return Ratio(static_cast<double>(counts.data_property_count),
               static_cast<double>(counts.class_count), "AR");
}

double ClassRichness(const MetricCounts& counts) {
  return Ratio(static_cast<double>(counts.classes_with_instance),
               static_cast<double>(counts.class_count), "CR");
}

double AveragePopulation(const MetricCounts& counts) {
  return Ratio(static_cast<double>(counts.individual_count),
               static_cast<double>(counts.class_count), "AP");
}

double ScoreRk(const MetricCounts& counts) {
  const double rel = static_cast<double>(counts.object_property_count);
  const double cls = static_cast<double>(counts.class_count);
  const double sub = static_cast<double>(counts.subclassof_count);
  const double prop = static_cast<double>(counts.property_count());
  return Ratio(rel * cls * 100.0 + (sub + rel) * prop, (sub + rel) * cls,
               "Score_rk");
}

double ScoreBk(const MetricCounts& counts) {
  return Ratio(static_cast<double>(counts.classes_with_instance) * 100.0 +
                   static_cast<double>(counts.individual_count),
               static_cast<double>(counts.class_count), "Score_bk");
}

MetricsReport ComputeMetrics(const MetricCounts& counts) {
  MetricsReport report;
  report.rr = RelationshipRichness(counts);
  report.ar = AttributeRichness(counts);
  report.cr = ClassRichness(counts);
  report.ap = AveragePopulation(counts);
  report.score_rk = ScoreRk(counts);
  report.score_bk = ScoreBk(counts);
  report.inputs = counts;
  return report;
}

std::string FormatMetricsTable(const MetricsReport& report) {
  std::string out = "Metric    Value\n";
  char line[64];
  auto row = [&](const char* name, double value) {
    std::snprintf(line, sizeof(line), "%-9s %.2f\n", name, value);
    out += line;
  };
  row("RR", report.rr);
  row("AR", report.ar);
  row("CR", report.cr);
  row("AP", report.ap);
  row("Score_rk", report.score_rk);
  row("Score_bk", report.score_bk);
  return out;
}

}  // namespace vbd
