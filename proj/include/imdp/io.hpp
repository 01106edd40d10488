#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imdp/engine.hpp"
#include "imdp/model.hpp"
#include "imdp/query.hpp"
#include "imdp/runtime.hpp"

namespace imdp {

inline constexpr int kFormatVersion = 1;

/// Query plus the solver settings stored alongside it.
struct QueryFile {
    Query query;
    std::optional<double> epsilon;
    std::optional<std::size_t> max_iters;
};

/// Parsers throw InputError with "line:column" or a JSON path in the message.
Imdp parse_model(const std::string& text);
std::string serialize_model(const Imdp& model);
QueryFile parse_query(const std::string& text);
std::string serialize_query(const QueryFile& q);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Strategies are exported with original state and action ids.
std::string serialize_strategy(const Imdp& model, const CountingStrategy& s);
std::string serialize_strategy(const Imdp& model, const MixtureStrategy& s);
std::string serialize_strategy(const Imdp& model, const RandomisedCountingStrategy& s);
CountingStrategy parse_counting_strategy(const Imdp& model, const std::string& text);
MixtureStrategy parse_mixture_strategy(const Imdp& model, const std::string& text);

/// Mixture over the generated points, dropping zero-probability components.
MixtureStrategy mixture_of(const Generated& found, const Vec& probs);

std::string serialize_result(const BasicQuery& basic, const SynthesisResult& r);
std::string serialize_result(const BasicQuery& basic, const QuantResult& r);
std::string serialize_result(const BasicQuery& basic, const ParetoApprox& r);
std::string serialize_result(const SimResult& r);

/// Header "obj1,obj2", one vertex per row, round-trip precision.
std::string pareto_csv(const ParetoApprox& r);
std::vector<Vec> parse_pareto_csv(const std::string& text);

}  // namespace imdp
