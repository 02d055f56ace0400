#pragma once

// JSON schema for forms, datasets, Hamiltonians, spectral measures and
// pipeline reports. Reals are read from numbers or decimal strings and written
// as numbers; complex values are [re, im] pairs.

#include <nlohmann/json.hpp>
#include <string>

#include "mif/canonical.hpp"
#include "mif/errors.hpp"
#include "mif/herglotz.hpp"
#include "mif/inverse_pipeline.hpp"
#include "mif/reconstruct.hpp"

namespace mif::io {

using json = nlohmann::json;

/// Schema violation; `pointer()` is the JSON pointer of the offending field.
class ValidationError : public DomainError {
 public:
  ValidationError(std::string pointer, const std::string& message);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

json to_json(complex value);
complex complex_from_json(const json& j, const std::string& pointer = "");

json to_json(const HerglotzForm& form);
HerglotzForm form_from_json(const json& j);

json to_json(const InterlacingPairs& pairs);
/// Accepts {"a": [...], "b": [...]} with optional "indexing"/"firstIndex",
/// or a product form.
InterlacingPairs pairs_from_json(const json& j);

json to_json(const ConstantSpec& constant);
ConstantSpec constant_from_json(const json& j, const std::string& pointer = "/constant");

json to_json(const SpectralDataset& dataset);
SpectralDataset dataset_from_json(const json& j);

json to_json(const canonical::Hamiltonian& hamiltonian);
canonical::Hamiltonian hamiltonian_from_json(const json& j);

json to_json(const canonical::SpectralMeasure& measure);
canonical::SpectralMeasure measure_from_json(const json& j);

json to_json(const canonical::InverseProblem& problem);
json to_json(const canonical::PipelineReport& report);

/// Parses text, turning syntax errors into ValidationError at pointer "".
json parse(const std::string& text);

}  // namespace mif::io
