#include "cfl/classify403.hpp"
#include "cfl/fiber.hpp"
#include "cfl/hyp3.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cfl;

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

struct Loaded {
    DiagramSequence seq;
    CoverParams params;
};

// A sequence file may carry "g" and "n"; the flags fill in what it lacks.
Loaded load_sequence(const std::string& path, int g, int n)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    auto j = nlohmann::json::parse(in);
    if (j.contains("g")) g = j["g"].get<int>();
    if (j.contains("n")) n = j["n"].get<int>();
    Loaded out{sequence_from_json(j), make_params(g, n)};
    auto problems = validate_sequence(out.seq, n);
    if (!problems.empty()) throw std::runtime_error("invalid sequence: " + problems.front());
    return out;
}

int cmd_enumerate(std::ostream& os, int g, int n, int type, int depth, int chain, const std::string& format)
{
    SequenceEngine eng(make_params(g, n), Bounds{depth, chain});
    for (const auto& s : eng.enumerate_sequences(type)) {
        if (format == "key") os << canonical_key(s) << "\n";
        else os << sequence_to_json(s).dump() << "\n";
    }
    return 0;
}

int cmd_classify_403(std::ostream& os, int max_chain)
{
    SequenceEngine eng(make_params(4, 3), Bounds{max_chain + 2, 64});
    auto classes = classify_all(eng.enumerate_sequences());
    std::map<Family403, std::set<std::vector<int>>> seen;
    int mismatches = 0;
    os << "family,indices,l,alpha0,alpha1,epsilon,ind,sigma\n";
    for (const auto& [c, rep] : classes) {
        if (c.chain() > max_chain) continue;
        seen[c.family].insert(c.up_to_chain());
        const auto row = compute_row(rep);
        const auto want = fixture_row(c);
        os << family_name(c.family) << "," << csv_field(indices_string(c.up_to_chain())) << ","
           << (c.has_chain() ? std::to_string(c.chain()) : "") << "," << row.alpha0 << "," << row.alpha1 << ","
           << row.epsilon << "," << to_string(row.ind) << "," << to_string(row.sigma) << "\n";
        if (!(row == want)) {
            ++mismatches;
            std::cerr << "mismatch " << class_name(c) << ": computed " << row.alpha0 << "," << row.alpha1 << ","
                      << row.epsilon << "," << to_string(row.ind) << "," << to_string(row.sigma) << " table "
                      << want.alpha0 << "," << want.alpha1 << "," << want.epsilon << "," << to_string(want.ind) << ","
                      << to_string(want.sigma) << "\n";
        }
    }
    const std::map<Family403, std::size_t> expected = {
        {Family403::f0, 11}, {Family403::I, 6}, {Family403::II, 3}, {Family403::III, 7}, {Family403::IV, 4},
        {Family403::V, 4},   {Family403::VI, 2}, {Family403::VII, 3}, {Family403::VIII, 1}};
    for (auto [f, count] : expected)
        if (seen[f].size() != count) {
            ++mismatches;
            std::cerr << "census " << family_name(f) << ": " << seen[f].size() << " classes, table has " << count << "\n";
        }
    return mismatches ? 2 : 0;
}

int cmd_classify_hyp3(std::ostream& os, int max_index)
{
    int mismatches = 0;
    os << "family,indices,alpha2,epsilon,ind\n";
    for (const auto& c : g3_classes(max_index)) {
        const auto seq = expand_essential(representative_g3(c));
        const auto row = compute_g3_row(seq);
        os << family_name(c.family) << "," << csv_field(indices_string_g3(c.indices)) << "," << row.alpha2 << ","
           << row.epsilon << "," << to_string(row.ind) << "\n";
        const auto back = classify_g3(essentialize(seq));
        if (!(back == c) || row.ind != horikawa_g3(c)) {
            ++mismatches;
            std::cerr << "mismatch " << class_name(c) << ": reclassified " << class_name(back) << ", Ind "
                      << to_string(row.ind) << " vs closed form " << to_string(horikawa_g3(c)) << "\n";
        }
    }
    return mismatches ? 2 : 0;
}

int cmd_invariants(std::ostream& os, const std::string& path, int g, int n)
{
    auto [seq, params] = load_sequence(path, g, n);
    auto cfg = resolve(realize(seq, params));
    InvariantVector v;
    v.alpha0 = alpha_zero(cfg, params.n);
    v.alpha = alpha_indices(cfg);
    v.epsilon = epsilon_index(cfg, params.n);
    os << v.alpha0;
    for (int a : v.alpha) os << "," << a;
    os << "," << v.epsilon << "," << to_string(horikawa_index(params.n, params.r, v)) << ","
       << to_string(local_signature(params.n, params.r, v)) << "\n";
    return 0;
}

int cmd_fiber(std::ostream& os, const std::string& path, int g, int n, const std::string& format)
{
    auto [seq, params] = load_sequence(path, g, n);
    auto fg = contract_minus_ones(apply_covering(resolve(realize(seq, params)), params.n));
    if (format == "dot") os << fiber_to_dot(fg);
    else os << fiber_to_json(fg).dump(2) << "\n";
    return zariski_check(fg) ? 0 : 2;
}

int cmd_check_multiple(std::ostream& os, int n_max, int max_blowups)
{
    int failures = 0;
    const auto bad = easylem_check(n_max);
    os << "easylem n<=" << n_max << ": " << bad.size() << " counterexamples\n";
    for (const auto& r : bad) os << "  n=" << r.n << " a=" << r.a << " b=" << r.b << "\n";
    failures += static_cast<int>(bad.size());
    for (int n = 4; n <= n_max; ++n) {
        const auto res = sharp_search(n, max_blowups);
        os << "sharp n=" << n << " blow-ups<=" << max_blowups << ": explored " << res.explored << ", satisfying "
           << res.satisfying << "\n";
        if (res.satisfying) ++failures;
    }
    return failures ? 2 : 0;
}

int cmd_tables(std::ostream& os, const std::string& which, int max_chain, int max_index)
{
    if (which == "403") {
        SequenceEngine eng(make_params(4, 3), Bounds{max_chain + 2, 64});
        os << "family,indices,l,alpha0,alpha1,epsilon,ind,sigma\n";
        for (const auto& [c, rep] : classify_all(eng.enumerate_sequences())) {
            if (c.chain() > max_chain) continue;
            const auto r = fixture_row(c);
            os << family_name(c.family) << "," << csv_field(indices_string(c.up_to_chain())) << ","
               << (c.has_chain() ? std::to_string(c.chain()) : "") << "," << r.alpha0 << "," << r.alpha1 << ","
               << r.epsilon << "," << to_string(r.ind) << "," << to_string(r.sigma) << "\n";
        }
        return 0;
    }
    os << "family,indices,ind\n";
    for (const auto& c : g3_classes(max_index))
        os << family_name(c.family) << "," << csv_field(indices_string_g3(c.indices)) << "," << to_string(horikawa_g3(c)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Singular fibers of cyclic covering fibrations via singularity diagrams"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "write to this file instead of stdout");

    int g = 4, n = 3, type = 0, depth = 4, chain = 3, max_index = 3, n_max = 5, blowups = 12;
    std::string format = "json", which, path;

    auto* en = app.add_subcommand("enumerate", "admissible sequences in canonical order");
    en->add_option("--g", g, "fiber genus")->required();
    en->add_option("--n", n, "covering degree")->required();
    en->add_option("--type", type, "root type")->required()->check(CLI::IsMember({0, 1}));
    en->add_option("--max-depth", depth, "fork-tree depth bound")->capture_default_str();
    en->add_option("--max-chain", chain, "repeated-diagram bound")->capture_default_str();
    en->add_option("--format", format, "json lines or canonical keys")->check(CLI::IsMember({"json", "key"}))->capture_default_str();

    auto* c403 = app.add_subcommand("classify-403", "census and invariant table for (g,n) = (4,3)");
    c403->add_option("--max-chain", chain, "largest chain index l")->capture_default_str();

    auto* chyp = app.add_subcommand("classify-hyp3", "genus-3 hyperelliptic classes with Horikawa index");
    chyp->add_option("--max-index", max_index, "largest finite index")->capture_default_str();

    auto* inv = app.add_subcommand("invariants", "alpha_0..alpha_k, epsilon, Ind, sigma of one sequence");
    inv->add_option("--sequence", path, "sequence JSON")->required()->check(CLI::ExistingFile);
    inv->add_option("--g", g, "fiber genus, unless the file gives it")->capture_default_str();
    inv->add_option("--n", n, "covering degree, unless the file gives it")->capture_default_str();

    auto* fib = app.add_subcommand("fiber", "dual graph of the fiber");
    fib->add_option("--sequence", path, "sequence JSON")->required()->check(CLI::ExistingFile);
    fib->add_option("--g", g, "fiber genus, unless the file gives it")->capture_default_str();
    fib->add_option("--n", n, "covering degree, unless the file gives it")->capture_default_str();
    fib->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();

    auto* mult = app.add_subcommand("check-multiple", "residue lemma and the search for (#)");
    mult->add_option("--n-max", n_max, "largest covering degree")->required()->check(CLI::Range(4, 1000));
    mult->add_option("--max-blowups", blowups, "blow-up bound of the tree search")->capture_default_str();

    auto* tab = app.add_subcommand("tables", "the printed tables, for diffing");
    tab->add_option("--which", which, "403 or hyp3")->required()->check(CLI::IsMember({"403", "hyp3"}));
    tab->add_option("--max-chain", chain, "largest chain index l")->capture_default_str();
    tab->add_option("--max-index", max_index, "largest finite index")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            std::cerr << "cannot write " << output << "\n";
            return 1;
        }
    }
    std::ostream& os = output.empty() ? std::cout : file;

    try {
        if (*en) return cmd_enumerate(os, g, n, type, depth, chain, format);
        if (*c403) return cmd_classify_403(os, chain);
        if (*chyp) return cmd_classify_hyp3(os, max_index);
        if (*inv) return cmd_invariants(os, path, g, n);
        if (*fib) return cmd_fiber(os, path, g, n, format);
        if (*mult) return cmd_check_multiple(os, n_max, blowups);
        if (*tab) return cmd_tables(os, which, chain, max_index);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
