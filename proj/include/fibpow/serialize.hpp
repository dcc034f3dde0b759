#pragma once

#include "fibpow/contfrac.hpp"
#include "fibpow/enumeration.hpp"
#include "fibpow/linforms.hpp"
#include "fibpow/pipeline.hpp"

#include <json.hpp>

#include <string>

namespace fibpow {

using Json = nlohmann::json;

void to_json(Json& j, const RealBall& x);
void from_json(const Json& j, RealBall& x);
void to_json(Json& j, const SolutionRecord& s);
void from_json(const Json& j, SolutionRecord& s);
void to_json(Json& j, const SolutionSet& s);
void from_json(const Json& j, SolutionSet& s);
void to_json(Json& j, const CFExpansion& cf);
void from_json(const Json& j, CFExpansion& cf);
void to_json(Json& j, const ChainReport& r);
void from_json(const Json& j, ChainReport& r);
void to_json(Json& j, const Relation& r);
void from_json(const Json& j, Relation& r);
void to_json(Json& j, const MuSpec& m);
void from_json(const Json& j, MuSpec& m);
void to_json(Json& j, const StepSpec& s);
void from_json(const Json& j, StepSpec& s);
void to_json(Json& j, const Reduced& r);
void from_json(const Json& j, Reduced& r);
void to_json(Json& j, const StepResult& r);
void from_json(const Json& j, StepResult& r);
void to_json(Json& j, const PipelineReport& r);
void from_json(const Json& j, PipelineReport& r);

// Pretty-printed JSON with a trailing newline.
template <class T>
std::string emit(const T& x) {
  Json j = x;
  return j.dump(2) + "\n";
}

template <class T>
T parse(const std::string& text) {
  return Json::parse(text).get<T>();
}

std::string solutions_csv(const SolutionSet& s);
std::string solutions_text(const SolutionSet& s);

}  // namespace fibpow
