// larglab: sample function families, check their structure, build local
// area random graphs on them, and run the back-and-forth matcher.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "larglab/json_io.hpp"
#include "larglab/matcher.hpp"

using namespace larglab;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 check/certificate failure, 2 budget exhausted,
// 3 invalid input.
constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kInvalidInput = 3;

json output_wrapper(const std::string& command, const json& config) {
    json j;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    return j;
}

void emit(const std::string& path, const json& j) {
    if (path.empty()) return;
    write_json_file(path, j);
}

FuncKind parse_kind(const std::string& s) {
    if (s == "pl") return FuncKind::pl;
    if (s == "poly") return FuncKind::poly;
    if (s == "bm") return FuncKind::bm;
    throw CLI::ValidationError("--kind must be pl, poly or bm");
}

FunctionFamily load_family(const std::string& path) {
    return family_from_json(read_json_file(path));
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        csv << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            csv << row[i] << (i + 1 < row.size() ? "," : "\n");
}

std::string rational_str(const Rational& r) { return r.num_string() + "/" + r.den_string(); }

json violation_json(const Violation& v) {
    json j;
    j["kind"] = violation_kind_name(v.kind);
    j["ids"] = v.ids;
    if (v.x) j["x"] = json::array({v.x->num_string(), v.x->den_string()});
    return j;
}

int cmd_sample(const std::string& kind, int n, std::uint64_t seed, int depth, double mean,
               const std::string& out) {
    FamilySpec spec{parse_kind(kind), n, seed, depth, mean};
    FunctionFamily fam = sample_family(spec);
    json config{{"kind", kind},   {"n", n},       {"seed", seed},
                {"depth", depth}, {"mean", mean}, {"out", out}};
    json j = output_wrapper("sample", config);
    json fj = family_to_json(fam);
    j["spec"] = fj["spec"];
    j["functions"] = fj["functions"];
    emit(out, j);
    std::cout << "sampled " << n << " " << kind << " function(s), seed " << seed << ", hash "
              << family_hash(fam) << (out.empty() ? "" : ", wrote " + out) << "\n";
    return kOk;
}

int cmd_check(const std::string& family_path, const std::string& mode, int resolution,
              const std::string& report_path) {
    FunctionFamily fam = load_family(family_path);
    if (mode == "exact" && fam.spec.kind == FuncKind::poly) {
        std::cerr << "check: polynomial families need --mode tolerant (rendered at --resolution)\n";
        return kInvalidInput;
    }
    PLFamilyView view = render_family(fam, resolution);
    TransversalityReport rep = check_transverse(view);

    json config{{"family", family_path},
                {"mode", mode},
                {"resolution", resolution},
                {"report", report_path}};
    json j = output_wrapper("check", config);
    j["family_hash"] = family_hash(fam);
    j["ok"] = rep.ok;
    j["at_resolution"] = rep.at_resolution;
    json viols = json::array();
    for (const auto& v : rep.violations) viols.push_back(violation_json(v));
    j["violations"] = viols;
    json advis = json::array();
    for (const auto& v : rep.slope_advisories) advis.push_back(violation_json(v));
    j["slope_advisories"] = advis;
    emit(report_path, j);

    std::cout << (rep.ok ? "transverse: ok" : "transverse: FAILED") << " ("
              << rep.violations.size() << " violation(s), " << rep.slope_advisories.size()
              << " slope advisories)\n";
    for (const auto& v : rep.violations) {
        std::cout << "  " << violation_kind_name(v.kind) << " ids";
        for (int id : v.ids) std::cout << " " << id;
        if (v.x) std::cout << " at x=" << rational_str(*v.x);
        std::cout << "\n";
    }
    return rep.ok ? kOk : kCheckFailure;
}

int cmd_partition(const std::string& family_path, int resolution, const std::string& out) {
    FunctionFamily fam = load_family(family_path);
    PLFamilyView view = render_family(fam, resolution);
    json config{{"family", family_path}, {"resolution", resolution}, {"out", out}};
    json j = output_wrapper("partition", config);
    j["family_hash"] = family_hash(fam);
    try {
        CrossingPartition part = crossing_partition(view);
        json cells = json::array();
        for (const auto& c : part.cells) {
            json cj;
            cj["lo"] = json::array({c.lo.num_string(), c.lo.den_string()});
            cj["hi"] = json::array({c.hi.num_string(), c.hi.den_string()});
            cj["closed"] = c.closed;
            if (c.closed) cj["pair"] = json::array({c.ids.first, c.ids.second});
            cells.push_back(cj);
        }
        j["cells"] = cells;
        emit(out, j);
        std::cout << "partition: " << part.cells.size() << " cell(s), " << part.closed_count()
                  << " closed\n";
        return kOk;
    } catch (const StructuralError& e) {
        j["error"] = e.what();
        emit(out, j);
        std::cout << "partition failed: " << e.what() << "\n";
        return kCheckFailure;
    }
}

int cmd_larg(const std::string& family_path, double p, std::uint64_t seed, bool tolerant,
             const std::string& out) {
    FunctionFamily fam = load_family(family_path);
    LargGraph g = build_larg(fam, p, seed, !tolerant);
    json config{{"family", family_path},
                {"p", p},
                {"seed", seed},
                {"tolerant", tolerant},
                {"out", out}};
    json j = output_wrapper("larg", config);
    json gj = graph_to_json(g);
    for (auto it = gj.begin(); it != gj.end(); ++it) j[it.key()] = it.value();
    emit(out, j);
    std::cout << "larg: " << g.n << " vertices, " << g.edge_count() << " edges, "
              << g.ambiguous_pairs.size() << " ambiguous pair(s)\n";
    return kOk;
}

int cmd_match(const std::string& left, const std::string& gleft, const std::string& right,
              const std::string& gright, const std::string& mode, int steps, long long budget,
              double eps0, bool favor_identity, const std::string& out) {
    FunctionFamily V = load_family(left);
    FunctionFamily W = load_family(right);
    LargGraph g1 = graph_from_json(read_json_file(gleft));
    LargGraph g2 = graph_from_json(read_json_file(gright));
    if (g1.family_hash != family_hash(V) || g2.family_hash != family_hash(W)) {
        std::cerr << "match: graph/family hash mismatch\n";
        return kInvalidInput;
    }
    EngineOptions opt;
    opt.mode = mode == "icd" ? MatchMode::icd : MatchMode::sd;
    opt.steps = steps;
    opt.budget = budget;
    opt.eps0 = eps0;
    opt.favor_identity = favor_identity;
    if (const char* cap = std::getenv("LARGLAB_MAX_DEPTH")) opt.max_bm_depth = std::atoi(cap);

    MatchTranscript t = back_and_forth(V, W, g1, g2, opt);

    json config{{"left", left},
                {"graph_left", gleft},
                {"right", right},
                {"graph_right", gright},
                {"mode", mode},
                {"steps", steps},
                {"budget", budget},
                {"eps0", eps0},
                {"favor_identity", favor_identity},
                {"out", out}};
    json j = output_wrapper("match", config);
    j["status"] = static_cast<int>(t.status);
    j["message"] = t.message;
    j["completed_steps"] = t.completed_steps;
    json pairs = json::array();
    for (const auto& [a, b] : t.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = pairs;
    json steps_j = json::array();
    for (const auto& s : t.steps) {
        json sj;
        sj["direction"] = s.forth ? "forth" : "back";
        sj["new"] = s.new_id;
        sj["chosen"] = s.chosen_id;
        sj["eps_used"] = s.eps_used;
        sj["candidates_examined"] = s.candidates_examined;
        sj["certificates"] = {{"step_isometry", s.cert_step_isometry},
                              {"order_or_matching", s.cert_order_or_matching},
                              {"adjacency", s.cert_adjacency}};
        sj["target"] = s.target_note;
        steps_j.push_back(sj);
    }
    j["steps"] = steps_j;
    emit(out, j);

    const char* status_name = t.status == MatchStatus::accepted ? "accepted"
                              : t.status == MatchStatus::budget_exhausted ? "budget exhausted"
                                                                          : "failure";
    std::cout << "match " << status_name << ": " << t.completed_steps << " step(s), "
              << t.pairs.size() << " pair(s)";
    if (!t.message.empty()) std::cout << " -- " << t.message;
    std::cout << "\n";
    return static_cast<int>(t.status);
}

int cmd_ic_profile(const std::string& family_path, int i, int k, const std::string& depths_str,
                   const std::string& format, const std::string& out) {
    FunctionFamily fam = load_family(family_path);
    std::vector<int> depths = parse_int_list(depths_str);
    ICProfile prof = ic_profile(fam.by_id(i), fam.by_id(k), depths);

    json config{{"family", family_path}, {"i", i},           {"j", k},
                {"depths", depths_str},  {"format", format}, {"out", out}};
    json j = output_wrapper("ic-profile", config);
    j["pair"] = json::array({prof.ids.first, prof.ids.second});
    json counts = json::array();
    for (const auto& [d, c] : prof.counts) counts.push_back(json::array({d, c}));
    j["counts"] = counts;
    if (format == "csv" && !out.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [d, c] : prof.counts)
            rows.push_back({std::to_string(d), std::to_string(c)});
        write_csv(out, {"depth", "crossings"}, rows);
    } else {
        emit(out, j);
    }
    std::cout << "ic-profile pair (" << prof.ids.first << "," << prof.ids.second << "):";
    for (const auto& [d, c] : prof.counts) std::cout << " " << d << ":" << c;
    std::cout << "\n";
    return kOk;
}

int cmd_join_prob(int k, int l, double p) {
    std::cout << correct_join_prob(k, l, p) << "\n";
    return kOk;
}

int cmd_report(const std::string& family_path, int target, const std::string& adjacent,
               long long trials, double p, std::uint64_t seed, int jobs,
               const std::string& format, const std::string& out) {
    FunctionFamily fam = load_family(family_path);
    std::vector<int> adj = parse_int_list(adjacent);
    std::set<int> adj_set(adj.begin(), adj.end());
    JoinFrequency f =
        estimate_join_frequency(fam, fam.by_id(target), adj_set, trials, p, seed, jobs);
    int kk = static_cast<int>(adj_set.size());
    int ll = static_cast<int>(fam.functions.size()) - kk - 1;
    double closed_form = correct_join_prob(kk, ll, p);

    json config{{"family", family_path}, {"target", target}, {"adjacent", adjacent},
                {"trials", trials},      {"p", p},           {"seed", seed},
                {"jobs", jobs},          {"format", format}, {"out", out}};
    json j = output_wrapper("report", config);
    j["frequency"] = f.freq;
    j["stderr"] = f.stderr_;
    j["trials"] = f.trials;
    j["k"] = kk;
    j["l"] = ll;
    j["closed_form"] = closed_form;
    if (format == "csv" && !out.empty()) {
        write_csv(out, {"k", "l", "p", "trials", "frequency", "stderr", "closed_form"},
                  {{std::to_string(kk), std::to_string(ll), std::to_string(p),
                    std::to_string(trials), std::to_string(f.freq), std::to_string(f.stderr_),
                    std::to_string(closed_form)}});
    } else {
        emit(out, j);
    }
    std::cout << "join frequency " << f.freq << " +- " << f.stderr_ << " over " << f.trials
              << " trial(s); closed form " << closed_form << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local area random graphs on families of continuous functions"};
    app.require_subcommand(1);

    std::string s_kind = "pl", s_out;
    int s_n = 1, s_depth = 10;
    std::uint64_t s_seed = 0;
    double s_mean = 1.0;
    auto* sample = app.add_subcommand("sample", "draw a seeded function family");
    sample->add_option("--kind", s_kind, "pl|poly|bm")->required();
    sample->add_option("--n", s_n, "family size")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", s_seed, "64-bit seed")->required();
    sample->add_option("--depth", s_depth, "dyadic depth (bm)");
    sample->add_option("--mean", s_mean, "Poisson mean for sizes/degrees");
    sample->add_option("--out", s_out, "output family json");

    std::string c_family, c_mode = "exact", c_report;
    int c_resolution = 4096;
    auto* check = app.add_subcommand("check", "transversality report for a family");
    check->add_option("--family", c_family)->required();
    check->add_option("--mode", c_mode, "exact|tolerant");
    check->add_option("--resolution", c_resolution, "pl rendering for poly families");
    check->add_option("--report", c_report, "output report json");

    std::string p_family, p_out;
    int p_resolution = 4096;
    auto* partition = app.add_subcommand("partition", "crossing partition of a family");
    partition->add_option("--family", p_family)->required();
    partition->add_option("--resolution", p_resolution);
    partition->add_option("--out", p_out);

    std::string l_family, l_out;
    double l_p = 0.5;
    std::uint64_t l_seed = 0;
    bool l_tolerant = false;
    auto* larg = app.add_subcommand("larg", "build a local area random graph");
    larg->add_option("--family", l_family)->required();
    larg->add_option("--p", l_p, "edge probability")->required();
    larg->add_option("--seed", l_seed, "coin seed")->required();
    larg->add_flag("--tolerant", l_tolerant, "flag ambiguous pairs instead of aborting");
    larg->add_option("--out", l_out);

    std::string m_left, m_gleft, m_right, m_gright, m_mode = "sd", m_out;
    int m_steps = 10;
    long long m_budget = 10000;
    double m_eps0 = 1.0;
    bool m_favor_identity = false;
    auto* match = app.add_subcommand("match", "back-and-forth partial isomorphism");
    match->add_option("--left", m_left)->required();
    match->add_option("--graph-left", m_gleft)->required();
    match->add_option("--right", m_right)->required();
    match->add_option("--graph-right", m_gright)->required();
    match->add_option("--mode", m_mode, "sd|icd");
    match->add_option("--steps", m_steps);
    match->add_option("--budget", m_budget, "candidates examined per step");
    match->add_option("--eps0", m_eps0, "epsilon schedule start");
    match->add_flag("--favor-identity", m_favor_identity, "try the twin id first");
    match->add_option("--out", m_out, "transcript json");

    std::string i_family, i_depths = "6,8,10,12,14", i_format = "json", i_out;
    int i_i = 0, i_j = 1;
    auto* icp = app.add_subcommand("ic-profile", "crossing counts per rendered depth");
    icp->add_option("--family", i_family)->required();
    icp->add_option("--i", i_i)->required();
    icp->add_option("--j", i_j)->required();
    icp->add_option("--depths", i_depths, "comma separated, increasing");
    icp->add_option("--format", i_format, "json|csv");
    icp->add_option("--out", i_out);

    int j_k = 0, j_l = 0;
    double j_p = 0.5;
    auto* jp = app.add_subcommand("join-prob", "closed-form correct-join probability");
    jp->add_option("--k", j_k, "required adjacencies")->required();
    jp->add_option("--l", j_l, "forbidden adjacencies")->required();
    jp->add_option("--p", j_p, "edge probability")->required();

    std::string r_family, r_adjacent, r_format = "json", r_out;
    int r_target = 0, r_jobs = 1;
    long long r_trials = 10000;
    double r_p = 0.5;
    std::uint64_t r_seed = 0;
    auto* report = app.add_subcommand("report", "Monte Carlo correct-join frequency");
    report->add_option("--family", r_family)->required();
    report->add_option("--target", r_target, "target function id")->required();
    report->add_option("--adjacent", r_adjacent, "comma separated ids to join");
    report->add_option("--trials", r_trials);
    report->add_option("--p", r_p)->required();
    report->add_option("--seed", r_seed);
    report->add_option("--jobs", r_jobs, "worker threads");
    report->add_option("--format", r_format, "json|csv");
    report->add_option("--out", r_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*sample) return cmd_sample(s_kind, s_n, s_seed, s_depth, s_mean, s_out);
        if (*check) return cmd_check(c_family, c_mode, c_resolution, c_report);
        if (*partition) return cmd_partition(p_family, p_resolution, p_out);
        if (*larg) return cmd_larg(l_family, l_p, l_seed, l_tolerant, l_out);
        if (*match)
            return cmd_match(m_left, m_gleft, m_right, m_gright, m_mode, m_steps, m_budget,
                             m_eps0, m_favor_identity, m_out);
        if (*icp) return cmd_ic_profile(i_family, i_i, i_j, i_depths, i_format, i_out);
        if (*jp) return cmd_join_prob(j_k, j_l, j_p);
        if (*report)
            return cmd_report(r_family, r_target, r_adjacent, r_trials, r_p, r_seed, r_jobs,
                              r_format, r_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kInvalidInput;
}
