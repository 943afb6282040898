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

#ifndef VBD_APP_CODEC_H_
#define VBD_APP_CODEC_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vbd/dss.h"
#include "vbd/kb.h"
#include "vbd/query.h"
#include "vbd/reasoner.h"
#include "vbd/text.h"

namespace vbd::app {

using json = nlohmann::json;

// Terms travel as {"value", "datatype", "label"}; datatype is "iri" for IRIs
// and label is the prefixed name or literal lexical form.
json TermToJson(const Term& term, const PrefixTable& prefixes);
json TripleToJson(const Triple& triple, const PrefixTable& prefixes);

// Resolves "<iri>", "_:b", "pfx:local", an absolute IRI, or a bare local name
// (taken in the vbd namespace). Returns nullopt for names it cannot expand.
std::optional<Term> ResolveName(std::string_view name, const PrefixTable& prefixes);

// Object of an assertion about `predicate`. `datatype` (iri, string,
// boolean, integer, decimal) wins; otherwise the schema decides (object
// properties take IRIs, data properties their declared range), and JSON
// booleans/numbers keep their type. Throws vbd::Error on malformed values.
Term ObjectFromJson(const json& value, const std::optional<std::string>& datatype,
                    const Term& predicate, const KnowledgeBase& kb);

json ProvenanceToJson(const std::vector<Provenance>& provenance,
                      const InferenceResult& result, const PrefixTable& prefixes);
json ViolationToJson(const Violation& violation, const PrefixTable& prefixes);
json SuggestionsToJson(const Suggestions& suggestions,
                       const InferenceResult& result, const PrefixTable& prefixes);
json DerivedToJson(const InferenceResult& result, const PrefixTable& prefixes);
json EventToJson(const Event& event, const PrefixTable& prefixes);
json CaseToJson(const PatientCase& c, const PrefixTable& prefixes);
json ExplanationsToJson(const Triple& fact, const std::vector<Explanation>& explanations,
                        const PrefixTable& prefixes);
json RuleToJson(const Rule& rule);
json SolutionsToJson(const SolutionTable& table, const PrefixTable& prefixes);
json KbReportToJson(const KbReport& report, const PrefixTable& prefixes);
json MentionsToJson(const std::vector<EntityMention>& mentions,
                    const PrefixTable& prefixes);

}  // namespace vbd::app

#endif  // VBD_APP_CODEC_H_
