#pragma once

#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "emle/design.hpp"
#include "emle/facial_set.hpp"
#include "emle/fit.hpp"
#include "emle/formula.hpp"
#include "emle/table.hpp"

namespace emle {

inline constexpr int kReportSchemaVersion = 1;

// Machine-readable report. Fit fields are present only when `fit` is.
nlohmann::json make_report(const ContingencyTable& table, const ModelFormula& model,
                           const DesignMatrix& design, const FacialSet& fs,
                           const std::optional<FitResult>& fit);

// Agreement between the sequential algorithm and the per-cell oracle.
nlohmann::json make_oracle_report(const ContingencyTable& table, const ModelFormula& model,
                                  const FacialSet& algorithm, const FacialSet& oracle);

// Human-readable rendering of either report; every number printed comes
// from the JSON document.
void write_text_report(std::ostream& out, const nlohmann::json& report);

}  // namespace emle
