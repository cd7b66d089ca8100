// Command line front-end: generation, witness acquisition, the end-to-end
// normalisation pipeline, verification, and machine-readable reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdecomp/decomp.hpp"
#include "tdecomp/errors.hpp"
#include "tdecomp/forest.hpp"
#include "tdecomp/pipeline.hpp"
#include "tdecomp/tournament.hpp"

namespace {

using namespace tdecomp;

constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitCap = 3;
constexpr int kExitParse = 4;

Tournament load_tournament(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    return read_tournament(in);
}

DecompositionWord load_word(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    return read_word(in);
}

void save(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int cmd_gen(const std::string& family, int n, std::uint64_t seed,
            const std::string& out_prefix) {
    Tournament t;
    std::optional<DecompositionWord> word;
    if (family == "rotating") {
        t = rotating(n);
        word = rotating_witness_word(n);
    } else if (family == "inverted_path") {
        t = inverted_path(n);
        word = inverted_path_witness_word(n);
    } else if (family == "lex_triangle_power") {
        t = lex_triangle_power(n);
    } else if (family == "random") {
        t = random_tournament(n, seed);
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }

    std::string prefix = out_prefix.empty() ? family + "_" + std::to_string(n) : out_prefix;
    {
        std::ostringstream os;
        write_tournament(os, t);
        save(prefix + ".tournament", os.str());
        std::cout << "wrote " << prefix << ".tournament (n=" << t.n << ")\n";
    }
    if (word) {
        std::ostringstream os;
        write_word(os, *word);
        save(prefix + ".word", os.str());
        std::cout << "wrote " << prefix << ".word (order "
                  << order_to_string(word->k) << ", " << word->size() << " letters)\n";
    }
    return 0;
}

int cmd_run(const std::string& input, const std::string& witness_path, bool trivial,
            bool bruteforce, std::size_t submonoid_cap, int bruteforce_cap,
            const std::string& report_path, const std::string& out_word_path) {
    Tournament t = load_tournament(input);

    DecompositionWord witness;
    if (!witness_path.empty()) {
        witness = load_word(witness_path);
    } else if (bruteforce) {
        auto [rank, order] = min_cutrank_bruteforce(t, bruteforce_cap);
        std::cout << "brute-force witness: minimum cut rank " << rank << "\n";
        witness = encode_trivial(t, order);
    } else if (trivial) {
        Ordering o(t.n);
        for (int i = 0; i < t.n; ++i) o[i] = i;
        witness = encode_trivial(t, o);
    } else {
        std::cerr << "run: choose exactly one witness source "
                     "(--witness, --trivial or --bruteforce)\n";
        return kExitUsage;
    }

    PipelineResult res = run_pipeline(t, witness, PipelineOptions{submonoid_cap});
    if (!report_path.empty()) save(report_path, res.report.dump(2) + "\n");
    if (res.exit_code != 0) {
        std::cerr << "run: " << res.error << "\n";
        return res.exit_code;
    }

    std::cout << "forest depth (" << res.report["forest"]["depth"][0] << ","
              << res.report["forest"]["depth"][1] << "), submonoid "
              << res.report["forest"]["submonoid"] << "\n";
    std::cout << "ordering cut rank " << res.report["ordering"]["cut_rank"]
              << " within bound " << res.report["ordering"]["f_bound"] << "\n";
    std::cout << "decomposition order " << res.report["decomposition"]["order"].get<std::string>()
              << ", " << res.report["decomposition"]["max_classes"] << " classes used\n";
    if (!out_word_path.empty()) {
        std::ostringstream os;
        write_word(os, res.out_word);
        save(out_word_path, os.str());
        std::cout << "wrote " << out_word_path << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& tournament_path, const std::string& word_path) {
    Tournament t = load_tournament(tournament_path);
    DecompositionWord w = load_word(word_path);
    Decoded d = decode(w);

    WidthReport rep = width_report(w);
    std::cout << "word: order " << order_to_string(rep.declared_k) << ", "
              << w.size() << " letters, " << rep.max_classes << " classes in use\n";

    std::string mismatch;
    if (d.graph.n != t.n) {
        mismatch = "vertex count differs";
    } else {
        for (std::size_t i = 0; i < d.ids.size() && mismatch.empty(); ++i)
            if (d.ids[i] != i) mismatch = "decoded ids are not 0..n-1";
        for (int u = 0; u < t.n && mismatch.empty(); ++u)
            for (int v = 0; v < t.n; ++v)
                if (u != v && d.graph.edge(u, v) != t.edge(u, v)) {
                    mismatch = "edge between " + std::to_string(u) + " and " +
                               std::to_string(v) + " differs";
                    break;
                }
    }
    if (!mismatch.empty()) {
        std::cerr << "verify: " << mismatch << "\n";
        return kExitMismatch;
    }
    std::cout << "verify: match\n";
    return 0;
}

int cmd_oracle(const std::string& tournament_path, int cap) {
    Tournament t = load_tournament(tournament_path);
    auto [rank, order] = min_cutrank_bruteforce(t, cap);
    std::cout << "minimum cut rank " << rank << "\nwitness ordering:";
    for (VertexId v : order) std::cout << " " << v;
    std::cout << "\n";
    return 0;
}

int cmd_forest(const std::string& word_path, std::size_t submonoid_cap) {
    DecompositionWord w = load_word(word_path);
    BuiltForest f = build_forest(w, submonoid_cap);
    std::cout << dump_forest(*f.root);
    std::cout << "submonoid " << f.submonoid_size << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear decompositions of tournaments"};
    app.require_subcommand(1);

    std::string family, out_prefix;
    int gen_n = 0;
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "generate a tournament (and witness word)");
    gen->add_option("family", family,
                    "rotating | inverted_path | lex_triangle_power | random")
        ->required();
    gen->add_option("n", gen_n, "size parameter (vertices, or power for triangles)")
        ->required();
    gen->add_option("--seed", seed, "seed for the random family");
    gen->add_option("--out", out_prefix, "output path prefix");

    std::string run_input, run_witness, report_path, out_word_path;
    bool run_trivial = false, run_bruteforce = false;
    std::size_t submonoid_cap = 10000;
    int bruteforce_cap = 8;
    auto* run = app.add_subcommand("run", "normalise a tournament end to end");
    run->add_option("--input", run_input, "tournament file")->required();
    run->add_option("--witness", run_witness, "decomposition word file");
    run->add_flag("--trivial", run_trivial, "use the fresh-colour witness");
    run->add_flag("--bruteforce", run_bruteforce,
                  "search a minimum cut-rank ordering first");
    run->add_option("--submonoid-cap", submonoid_cap, "closure size cap");
    run->add_option("--bruteforce-cap", bruteforce_cap, "max n for the search");
    run->add_option("--report", report_path, "write the JSON report here");
    run->add_option("--out-word", out_word_path, "write the produced word here");

    std::string verify_tournament, verify_word;
    auto* verify = app.add_subcommand("verify", "decode a word and compare");
    verify->add_option("tournament", verify_tournament, "tournament file")->required();
    verify->add_option("word", verify_word, "decomposition word file")->required();

    std::string oracle_tournament;
    auto* oracle = app.add_subcommand("oracle", "exhaustive minimum cut rank");
    oracle->add_option("tournament", oracle_tournament, "tournament file")->required();
    oracle->add_option("--bruteforce-cap", bruteforce_cap, "max n for the search");

    std::string forest_word;
    auto* forest = app.add_subcommand("forest", "print the factorisation forest");
    forest->add_option("word", forest_word, "decomposition word file")->required();
    forest->add_option("--submonoid-cap", submonoid_cap, "closure size cap");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(family, gen_n, seed, out_prefix);
        if (run->parsed())
            return cmd_run(run_input, run_witness, run_trivial, run_bruteforce,
                           submonoid_cap, bruteforce_cap, report_path, out_word_path);
        if (verify->parsed()) return cmd_verify(verify_tournament, verify_word);
        if (oracle->parsed()) return cmd_oracle(oracle_tournament, bruteforce_cap);
        if (forest->parsed()) return cmd_forest(forest_word, submonoid_cap);
    } catch (const ParseError& e) {
        std::cerr << "parse error";
        if (e.line > 0) std::cerr << " at line " << e.line << ", column " << e.column;
        std::cerr << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
