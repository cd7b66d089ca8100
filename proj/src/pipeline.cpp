#include "tdecomp/pipeline.hpp"

#include "tdecomp/errors.hpp"
#include "tdecomp/forest.hpp"

namespace tdecomp {

PipelineResult run_pipeline(const Tournament& t, const DecompositionWord& witness,
                            const PipelineOptions& opts) {
    PipelineResult res;
    res.report = nlohmann::ordered_json::object();
    res.report["input"] = {{"n", t.n},
                           {"witness_order", order_to_string(witness.k)},
                           {"witness_letters", witness.size()}};

    // The witness must decode to the input tournament exactly.
    Decoded d;
    try {
        d = decode(witness);
    } catch (const std::exception& e) {
        res.exit_code = kPipelineMismatch;
        res.error = std::string("witness does not decode: ") + e.what();
        res.report["error"] = res.error;
        return res;
    }
    std::string mismatch;
    if (d.graph.n != t.n) {
        mismatch = "vertex count differs: witness " + std::to_string(d.graph.n) +
                   ", input " + std::to_string(t.n);
    } else {
        for (std::size_t i = 0; i < d.ids.size() && mismatch.empty(); ++i)
            if (d.ids[i] != i) mismatch = "witness vertex ids are not 0..n-1";
        for (int u = 0; u < t.n && mismatch.empty(); ++u)
            for (int v = 0; v < t.n; ++v) {
                if (u == v) continue;
                if (d.graph.edge(u, v) != t.edge(u, v)) {
                    mismatch = "edge between " + std::to_string(u) + " and " +
                               std::to_string(v) + " differs";
                    break;
                }
            }
    }
    if (!mismatch.empty()) {
        res.exit_code = kPipelineMismatch;
        res.error = mismatch;
        res.report["error"] = mismatch;
        return res;
    }

    BuiltForest forest;
    try {
        forest = build_forest(witness, opts.submonoid_cap);
    } catch (const CapExceeded& e) {
        res.exit_code = kPipelineCapExceeded;
        res.error = e.what();
        res.report["error"] = res.error;
        return res;
    }
    res.report["forest"] = {{"depth", {forest.depth.p, forest.depth.q}},
                            {"submonoid", forest.submonoid_size},
                            {"certified", true}};

    OrderingResult ord = build_ordering(t, witness, *forest.root);
    res.ordering = ord.order;
    res.report["ordering"] = {{"cut_rank", ord.cut_rank},
                              {"f_bound", ord.bound},
                              {"order", ord.order}};
    res.report["nodes"] = ord.report["nodes"];

    res.out_word = decomposition_from_ordering(t, res.ordering);
    if (auto bad = verify_roundtrip(t, res.ordering, res.out_word))
        throw TheoryViolation("pipeline: output word does not roundtrip: " + *bad);
    WidthReport width = width_report(res.out_word);
    res.report["decomposition"] = {{"order", order_to_string(res.out_word.k)},
                                   {"max_classes", width.max_classes},
                                   {"roundtrip", "ok"}};

    // The reported numbers must be recomputable from the artifacts.
    if (cut_rank(t, res.ordering).cut_rank != ord.cut_rank)
        throw TheoryViolation("pipeline: reported cut rank is not reproducible");
    return res;
}

}  // namespace tdecomp
