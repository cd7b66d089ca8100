#pragma once

#include <string>

#include "json.hpp"
#include "tdecomp/decomp.hpp"
#include "tdecomp/ordering.hpp"

namespace tdecomp {

struct PipelineOptions {
    std::size_t submonoid_cap = 10000;
};

/// Exit codes shared with the command line front-end.
enum PipelineExit : int {
    kPipelineOk = 0,
    kPipelineMismatch = 2,   // witness does not decode to the input
    kPipelineCapExceeded = 3,
};

struct PipelineResult {
    int exit_code = kPipelineOk;
    std::string error;
    nlohmann::ordered_json report;
    Ordering ordering;
    DecompositionWord out_word;
};

/// Normalisation pipeline: check the witness, build the certified forest,
/// derive the bounded-cut-rank ordering, and re-encode it as a decomposition
/// of order 2^r + 1 for the measured rank r. Every claim in the report is
/// recomputed from the produced artifacts before returning.
PipelineResult run_pipeline(const Tournament& t, const DecompositionWord& witness,
                            const PipelineOptions& opts = {});

}  // namespace tdecomp
