#pragma once

#include <string>

#include "omplab/conditions.hpp"
#include "omplab/lemma_sweep.hpp"
#include "omplab/omp.hpp"
#include "omplab/ric.hpp"
#include "omplab/sharpness.hpp"

namespace omplab {

// Stable JSON renderings used by the CLI. Keys are documented in README.md.
// Infinite bounds are emitted as null alongside an explicit *_defined flag.

std::string to_json(const RicReport& r);
std::string to_json(const ConditionVerdict& v);
std::string to_json(const OmpResult& r);
std::string to_json(const ComparisonReport& r);
std::string to_json(const LemmaSweepReport& r);
std::string to_json(const FailureInstance& fi);

}  // namespace omplab
