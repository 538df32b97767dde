// Copyright 2026 The QSignal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "qsignal/protocols.hpp"

namespace qsignal {

/// Decimal with 17 significant digits; parses back to the same double.
std::string format_number(double value);

struct ScanRow {
    double value;  // the scanned parameter
    Protocol2Params params;
    AnalyticProtocol2 analytic;
};

struct AuditRow {
    std::size_t index;
    std::size_t dimension;
    AuditRecord record;
    bool passed;
};

// Report objects carry `params`, `analytic`, `empirical`, `diagnostics`, and
// optionally a `trials` array.
nlohmann::ordered_json to_json(const Protocol1Report &report, bool emit_trials);
nlohmann::ordered_json to_json(const Protocol2Report &report, bool emit_trials,
                       const std::vector<LambdaPoint> &lambda_table = {});
nlohmann::ordered_json to_json(const std::string &parameter, const std::vector<ScanRow> &rows);
nlohmann::ordered_json trial_json(const TrialRecord &trial);

/// One CSV record per trial.
std::string to_csv(const std::vector<TrialRecord> &trials);
std::string to_csv(const std::string &parameter, const std::vector<ScanRow> &rows);
std::string to_csv(const std::vector<AuditRow> &rows);

nlohmann::ordered_json audit_row_json(const AuditRow &row);
nlohmann::ordered_json operator_json(const Operator &op);

}  // namespace qsignal
