// quatsieve: obstruction checks for quaternionic endomorphism data of
// modular abelian varieties.
//
// Exit codes: 0 ok / no obstruction found, 2 input error, 3 excluded,
// 4 no applicable criterion, 1 internal or verification failure.

#include "quatsieve/json_io.hpp"
#include "quatsieve/sieve.hpp"
#include "quatsieve/table1.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace quatsieve;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitExcluded = 3;
constexpr int kExitNotApplicable = 4;

int verdict_exit_code(const Verdict& v) {
    switch (v.status) {
        case VerdictStatus::Excluded: return kExitExcluded;
        case VerdictStatus::NotApplicable: return kExitNotApplicable;
        default: return kExitOk;
    }
}

std::optional<FieldDesc> field_from_arg(const std::string& arg, std::string& err) {
    if (arg == "Q" || arg == "q") return FieldDesc::rationals();
    json j;
    try {
        j = json::parse(arg);
    } catch (const std::exception& e) {
        err = std::string("--field: ") + e.what();
        return std::nullopt;
    }
    ParseErrors errs;
    auto f = parse_field(j, "--field", errs);
    if (!f) err = errs.items.empty() ? "--field: invalid" : errs.items.front();
    return f;
}

std::optional<json> json_from_file(const std::string& path, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open " + path;
        return std::nullopt;
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        err = path + ": " + e.what();
        return std::nullopt;
    }
}

bool parse_range(const std::string& text, Int& lo, Int& hi) {
    auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        lo = Int(text.substr(0, colon));
        hi = Int(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return true;
}

int cmd_nset(const std::string& field_arg, long ell, const std::string& variant_arg,
             bool text) {
    std::string err;
    auto F = field_from_arg(field_arg, err);
    if (!F) {
        std::cerr << err << "\n";
        return kExitInput;
    }
    if (!is_prime(Int(ell))) {
        std::cerr << "--ell: must be prime\n";
        return kExitInput;
    }
    NsetVariant variant;
    if (variant_arg == "full") variant = NsetVariant::full;
    else if (variant_arg == "reduced") variant = NsetVariant::reduced;
    else {
        std::cerr << "--variant: expected full|reduced\n";
        return kExitInput;
    }
    ExceptionalSet s = compute_exceptional_set(*F, ell, variant);
    if (text) {
        std::cout << "exceptional set, ell=" << ell << ", field=" << F->str()
                  << ", variant=" << variant_name(variant) << "\n";
        for (const auto& pr : s.members)
            std::cout << "  " << (F->degree == 1 ? pr.p.get_str() : pr.str()) << "\n";
    } else {
        std::cout << json(s).dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_kappa(const std::string& field_arg, const std::string& disc_arg) {
    std::string err;
    auto F = field_from_arg(field_arg, err);
    if (!F) {
        std::cerr << err << "\n";
        return kExitInput;
    }
    json j;
    try {
        j = json::parse(disc_arg);
    } catch (const std::exception& e) {
        std::cerr << "--disc: " << e.what() << "\n";
        return kExitInput;
    }
    if (!j.is_array()) {
        std::cerr << "--disc: expected a JSON array of prime ideals\n";
        return kExitInput;
    }
    QuatDisc disc;
    disc.field = *F;
    ParseErrors errs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto pr = parse_prime_ideal(j[i], "--disc/" + std::to_string(i), errs);
        if (pr) {
            if (F->degree == 1) *pr = PrimeIdealF{pr->p, IdealKind::split, 0};
            disc.primes.push_back(*pr);
        }
    }
    if (!errs.ok()) {
        for (const auto& e : errs.items) std::cerr << e << "\n";
        return kExitInput;
    }
    std::sort(disc.primes.begin(), disc.primes.end());
    std::cout << compute_kappa_bound(disc) << "\n";
    return kExitOk;
}

int cmd_disc(const std::string& field_arg, long d, const std::string& m_arg) {
    std::string err;
    auto F = field_from_arg(field_arg, err);
    if (!F) {
        std::cerr << err << "\n";
        return kExitInput;
    }
    json jm;
    try {
        jm = json::parse(m_arg);
    } catch (const std::exception& e) {
        std::cerr << "--m: " << e.what() << "\n";
        return kExitInput;
    }
    ParseErrors errs;
    auto m = parse_algint(jm, "--m", errs);
    if (!m || !errs.ok()) {
        for (const auto& e : errs.items) std::cerr << e << "\n";
        return kExitInput;
    }
    try {
        QuatDisc disc = quat_discriminant(d, *m, *F);
        std::cout << json(disc).dump(2) << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}

int cmd_check(const std::string& path, long ell_bound, int assume_flag, bool enable_sy) {
    std::string err;
    auto j = json_from_file(path, err);
    if (!j) {
        std::cerr << err << "\n";
        return kExitInput;
    }
    ParseErrors errs;
    auto t = parse_triplet(*j, errs);
    if (t) {
        for (const auto& e : validate_triplet(*t)) errs.items.push_back(e);
    }
    if (!errs.ok() || !t) {
        for (const auto& e : errs.items) std::cerr << e << "\n";
        return kExitInput;
    }
    if (assume_flag >= 0) t->assume_locally_maximal = assume_flag != 0;
    RunOptions opts;
    opts.ell_bound = ell_bound;
    opts.enable_level_shape = enable_sy;
    Verdict v = run_all(*t, opts);
    std::cout << json(v).dump(2) << "\n";
    return verdict_exit_code(v);
}

int cmd_sieve(const std::string& m_range, const std::string& n_range, long ell_bound,
              unsigned parallelism, const std::string& output) {
    SieveJob job;
    if (!parse_range(m_range, job.m_lo, job.m_hi) ||
        !parse_range(n_range, job.n_lo, job.n_hi)) {
        std::cerr << "ranges use the form lo:hi\n";
        return kExitInput;
    }
    if (job.m_lo > job.m_hi || job.n_lo > job.n_hi || ell_bound < 2) {
        std::cerr << "empty range or ell bound below 2\n";
        return kExitInput;
    }
    job.ell_bound = ell_bound;
    job.parallelism = parallelism;
    job.output_path = output;
    std::string csv = run_pair_sieve(job);
    if (output.empty()) {
        std::cout << csv;
    } else {
        write_file_atomic(output, csv);
    }
    return kExitOk;
}

int cmd_verify_table1(const std::string& fixture_path) {
    if (!fixture_path.empty()) {
        std::string err;
        auto j = json_from_file(fixture_path, err);
        if (!j) {
            std::cerr << err << "\n";
            return kExitInput;
        }
        if (*j != table1_to_json()) {
            std::cerr << "fixture rows differ from the embedded reference table\n";
            return kExitFailure;
        }
    }
    bool all_ok = true;
    for (const auto& rep : verify_table1()) {
        std::printf("%s row L=%-5ld [%s] %s\n", rep.ok ? "ok  " : "FAIL", rep.L,
                    rep.status.c_str(), rep.detail.c_str());
        if (!rep.ok) {
            all_ok = false;
            std::cerr << "row L=" << rep.L << " failed: " << rep.detail << "\n";
        }
    }
    return all_ok ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"obstruction sieve for quaternionic endomorphism data"};
    app.require_subcommand(1);

    std::string field_arg = "Q", variant_arg = "full";
    long ell = 2;
    bool text = false;
    auto* nset = app.add_subcommand("nset", "print an exceptional prime set");
    nset->add_option("--field", field_arg, "\"Q\" or {\"degree\":2,\"D\":..}");
    nset->add_option("--ell", ell, "auxiliary prime")->required();
    nset->add_option("--variant", variant_arg, "full|reduced");
    nset->add_flag("--text", text, "aligned text instead of JSON");

    std::string disc_arg;
    auto* kappa = app.add_subcommand("kappa", "print the unit-order bound of a discriminant");
    kappa->add_option("--field", field_arg, "base field");
    kappa->add_option("--disc", disc_arg, "JSON array of prime ideals")->required();

    long d_arg = 1;
    std::string m_arg;
    auto* disc = app.add_subcommand("disc", "print the discriminant of (-d, m / F)");
    disc->add_option("--field", field_arg, "base field");
    disc->add_option("--d", d_arg, "positive square-free d")->required();
    disc->add_option("--m", m_arg, "totally positive m, JSON {\"x\":..,\"y\":..} or integer")
        ->required();

    std::string triplet_path;
    long ell_bound = 100;
    int assume_flag = -1;
    bool enable_sy = false;
    auto* check = app.add_subcommand("check", "run all criteria against a triplet file");
    check->add_option("triplet", triplet_path, "triplet JSON path")->required();
    check->add_option("--ell-bound", ell_bound, "auxiliary prime bound (default 100)");
    check->add_option("--assume-locally-maximal", assume_flag,
                      "override the triplet's local-maximality flag (0|1)");
    check->add_flag("--check-sy", enable_sy, "also apply the optional level-shape criterion");

    std::string m_range, n_range, output;
    unsigned parallelism = 1;
    auto* sieve = app.add_subcommand("sieve-sh", "batch pair sieve, CSV output");
    sieve->add_option("--m-range", m_range, "inclusive prime range lo:hi")->required();
    sieve->add_option("--n-range", n_range, "inclusive prime range lo:hi")->required();
    sieve->add_option("--ell-bound", ell_bound, "auxiliary prime bound (default 100)");
    sieve->add_option("--parallelism,-j", parallelism, "worker count");
    sieve->add_option("--output,-o", output, "output path (atomic write); stdout if absent");

    std::string fixture_path;
    auto* verify = app.add_subcommand("verify-table1", "verify the reference table rows");
    verify->add_option("fixture", fixture_path, "fixture JSON to compare against the embedded table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (nset->parsed()) return cmd_nset(field_arg, ell, variant_arg, text);
        if (kappa->parsed()) return cmd_kappa(field_arg, disc_arg);
        if (disc->parsed()) return cmd_disc(field_arg, d_arg, m_arg);
        if (check->parsed()) return cmd_check(triplet_path, ell_bound, assume_flag, enable_sy);
        if (sieve->parsed()) return cmd_sieve(m_range, n_range, ell_bound, parallelism, output);
        if (verify->parsed()) return cmd_verify_table1(fixture_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitInput;
}
