#include "b1set/codec.hpp"
#include "b1set/construct.hpp"
#include "b1set/oracle.hpp"
#include "b1set/set_io.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using namespace b1set;
using ordered_json = nlohmann::ordered_json;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

struct CommonOpts {
    u64 q = 0;
    int lambda = 4;
    std::string set_arg;
    std::string word_arg;
    std::string message_arg;
    std::vector<std::string> base_files;
    u64 budget_nodes = Budget{}.max_nodes;
    double budget_secs = Budget{}.max_seconds;
    std::string format; // json|text|csv; per-command default when empty
    std::string out;
    std::string mode; // table only
    std::string r_list;
};

// ---- output -----------------------------------------------------------------

void render_text_value(std::ostream& os, const ordered_json& v) {
    if (v.is_array()) {
        bool first = true;
        for (const auto& e : v) {
            if (!first) os << " ";
            first = false;
            os << e.dump();
        }
        if (v.empty()) os << "(none)";
    } else if (v.is_string()) {
        os << v.get<std::string>();
    } else {
        os << v.dump();
    }
}

std::string render_text(const ordered_json& payload) {
    std::ostringstream os;
    for (auto it = payload.begin(); it != payload.end(); ++it) {
        if (it.value().is_array() && !it.value().empty() && it.value().front().is_object()) {
            os << it.key() << ":\n";
            for (const auto& row : it.value()) {
                os << "  -";
                for (auto f = row.begin(); f != row.end(); ++f) {
                    os << " " << f.key() << "=";
                    render_text_value(os, f.value());
                }
                os << "\n";
            }
            continue;
        }
        os << it.key() << ": ";
        if (it.value().is_object()) {
            os << it.value().dump();
        } else {
            render_text_value(os, it.value());
        }
        os << "\n";
    }
    std::string s = os.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

void emit(const ordered_json& payload, const CommonOpts& opt, const std::string& default_format) {
    const std::string fmt = opt.format.empty() ? default_format : opt.format;
    std::string body;
    if (fmt == "json")
        body = payload.dump();
    else if (fmt == "text")
        body = render_text(payload);
    else
        throw std::invalid_argument("format \"" + fmt + "\" is not available for this command");
    std::cout << body << "\n";
    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) throw std::invalid_argument("cannot write output file: " + opt.out);
        f << body << "\n";
    }
}

void emit_raw(const std::string& body, const CommonOpts& opt) {
    std::cout << body;
    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) throw std::invalid_argument("cannot write output file: " + opt.out);
        f << body;
    }
}

// ---- shared plumbing ---------------------------------------------------------

Budget make_budget(const CommonOpts& opt) { return Budget{opt.budget_nodes, opt.budget_secs}; }

BaseProvider make_provider(const CommonOpts& opt) {
    BaseProvider p;
    if (const char* dir = std::getenv("B1SET_BASE_DIR")) p.load_user_dir(dir);
    for (const auto& f : opt.base_files) p.load_user_file(f);
    p.set_budget(make_budget(opt));
    return p;
}

BSet load_set(const CommonOpts& opt, bool lambda_given) {
    if (opt.set_arg.empty()) throw std::invalid_argument("--set is required");
    if (std::filesystem::exists(opt.set_arg)) {
        BSet s = read_set_file(opt.set_arg);
        if (opt.q != 0 && s.q != opt.q)
            throw std::invalid_argument("--q " + std::to_string(opt.q) +
                                        " disagrees with the set file (q=" + std::to_string(s.q) +
                                        ")");
        if (lambda_given) s.lambda = opt.lambda;
        return s;
    }
    if (opt.q == 0) throw std::invalid_argument("--q is required with an inline --set list");
    return make_bset(opt.q, opt.lambda, parse_u64_csv(opt.set_arg));
}

ordered_json steps_json(const Report& rep) {
    ordered_json steps = ordered_json::array();
    for (const Step& st : rep.steps) {
        ordered_json j;
        j["op"] = st.op;
        j["q"] = st.q;
        j["base_q"] = st.base_q;
        j["size"] = st.size;
        j["note"] = st.note;
        steps.push_back(std::move(j));
    }
    return steps;
}

// ---- commands -----------------------------------------------------------------

int run_construct(const CommonOpts& opt) {
    if (opt.q < 2) throw std::invalid_argument("construct: --q must be at least 2");
    if (opt.lambda != 4)
        throw std::invalid_argument("construct: only lambda 4 is supported");
    BaseProvider provider = make_provider(opt);
    auto t0 = std::chrono::steady_clock::now();
    Report rep = construct(opt.q, provider);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "construct: q=" << opt.q << " size=" << rep.set.elements.size() << " ("
              << to_string(rep.exactness) << ") in " << secs << " s\n";
    ordered_json payload;
    payload["q"] = rep.set.q;
    payload["lambda"] = rep.set.lambda;
    payload["elements"] = rep.set.elements;
    payload["size"] = rep.set.elements.size();
    payload["exactness"] = to_string(rep.exactness);
    payload["base_source"] = rep.base_source;
    payload["steps"] = steps_json(rep);
    payload["notes"] = rep.notes;
    emit(payload, opt, "json");
    return 0;
}

int run_verify(const CommonOpts& opt, bool lambda_given) {
    // raw load: 0, duplicates and the like should yield a violation verdict,
    // not a loader error
    RawSet raw;
    if (std::filesystem::exists(opt.set_arg)) {
        raw = read_raw_set_file(opt.set_arg);
        if (opt.q != 0 && raw.q != opt.q)
            throw std::invalid_argument("--q " + std::to_string(opt.q) +
                                        " disagrees with the set file (q=" +
                                        std::to_string(raw.q) + ")");
        if (lambda_given) raw.lambda = opt.lambda;
    } else {
        if (opt.q == 0) throw std::invalid_argument("--q is required with an inline --set list");
        raw.q = opt.q;
        raw.lambda = opt.lambda;
        raw.elements = parse_u64_csv(opt.set_arg);
    }
    auto v = find_violation(raw.q, raw.lambda, raw.elements);
    ordered_json payload;
    payload["q"] = raw.q;
    payload["lambda"] = raw.lambda;
    payload["size"] = raw.elements.size();
    payload["valid"] = !v.has_value();
    if (v) {
        ordered_json vi;
        vi["i"] = v->i;
        vi["x"] = v->x;
        vi["j"] = v->j;
        vi["y"] = v->y;
        payload["violation"] = vi;
        std::cerr << "verify: " << v->i << "*" << v->x << " == " << v->j << "*" << v->y
                  << " (mod " << raw.q << ")\n";
    }
    emit(payload, opt, "json");
    return v ? 1 : 0;
}

int run_search(const CommonOpts& opt) {
    if (opt.q < 2) throw std::invalid_argument("search: --q must be at least 2");
    if (opt.lambda < 1) throw std::invalid_argument("search: --lambda must be positive");
    SearchResult sr = max_bset(opt.q, opt.lambda, make_budget(opt), true, &g_stop);
    std::cerr << "search: q=" << opt.q << " lambda=" << opt.lambda << " max=" << sr.max_size
              << " status=" << to_string(sr.status) << " nodes=" << sr.nodes << " in "
              << sr.seconds << " s\n";
    ordered_json payload;
    payload["q"] = sr.q;
    payload["lambda"] = sr.lambda;
    payload["max_size"] = sr.max_size;
    payload["witness"] = sr.witness;
    payload["status"] = to_string(sr.status);
    payload["nodes"] = sr.nodes;
    emit(payload, opt, "json");
    return sr.status == SearchStatus::exact ? 0 : 3;
}

int run_msize(const CommonOpts& opt) {
    if (opt.q < 2) throw std::invalid_argument("msize: --q must be at least 2");
    BaseProvider provider = make_provider(opt);
    Report rep = construct(opt.q, provider);
    ordered_json payload;
    payload["q"] = opt.q;
    payload["size"] = rep.set.elements.size();
    payload["exactness"] = to_string(rep.exactness);
    payload["base_source"] = rep.base_source;
    emit(payload, opt, "json");
    return 0;
}

int run_table(const CommonOpts& opt) {
    if (opt.mode != "conjecture" && opt.mode != "formula")
        throw std::invalid_argument("table: --mode must be conjecture or formula");
    std::vector<u64> rs;
    if (!opt.r_list.empty()) rs = parse_u64_csv(opt.r_list);
    for (u64 r : rs)
        if (r == 0 || std::gcd(r, u64(6)) != 1)
            throw std::invalid_argument("table: r=" + std::to_string(r) +
                                        " is not coprime to 6");
    Budget budget = make_budget(opt);
    bool all_exact = true;
    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    if (opt.mode == "conjecture") {
        csv << "q,r,search,bound,equal\n";
        for (u64 r : rs) {
            SearchResult big = max_bset(12 * r, 4, budget, true, &g_stop);
            SearchResult small = max_bset(2 * r, 4, budget, true, &g_stop);
            all_exact = all_exact && big.status == SearchStatus::exact &&
                        small.status == SearchStatus::exact;
            u64 bound = small.max_size + 2 * r;
            std::cerr << "table: q=" << 12 * r << " search=" << big.max_size
                      << " bound=" << bound << "\n";
            ordered_json row;
            row["q"] = 12 * r;
            row["r"] = r;
            row["search"] = big.max_size;
            row["bound"] = bound;
            row["equal"] = big.max_size == bound;
            rows.push_back(row);
            csv << 12 * r << "," << r << "," << big.max_size << "," << bound << ","
                << (big.max_size == bound ? "yes" : "no") << "\n";
        }
    } else {
        csv << "q,r,formula,search,equal\n";
        for (u64 r : rs) {
            u64 formula = m4_formula(r);
            SearchResult sr = max_bset(3 * r, 4, budget, true, &g_stop);
            all_exact = all_exact && sr.status == SearchStatus::exact;
            std::cerr << "table: q=" << 3 * r << " formula=" << formula
                      << " search=" << sr.max_size << "\n";
            ordered_json row;
            row["q"] = 3 * r;
            row["r"] = r;
            row["formula"] = formula;
            row["search"] = sr.max_size;
            row["equal"] = formula == sr.max_size;
            rows.push_back(row);
            csv << 3 * r << "," << r << "," << formula << "," << sr.max_size << ","
                << (formula == sr.max_size ? "yes" : "no") << "\n";
        }
    }
    const std::string fmt = opt.format.empty() ? "csv" : opt.format;
    if (fmt == "csv") {
        emit_raw(csv.str(), opt);
    } else {
        ordered_json payload;
        payload["mode"] = opt.mode;
        payload["rows"] = rows;
        emit(payload, opt, fmt);
    }
    if (g_stop.load()) return 3;
    return all_exact ? 0 : 3;
}

int run_code_build(const CommonOpts& opt, bool lambda_given) {
    Code code = build_code(load_set(opt, lambda_given));
    ordered_json payload;
    payload["q"] = code.base.q;
    payload["lambda"] = code.base.lambda;
    payload["length"] = code.length();
    payload["table_entries"] = code.table.size();
    payload["has_check"] = code.has_check;
    payload["check_pos"] = code.check_pos;
    emit(payload, opt, "json");
    return 0;
}

int run_code_encode(const CommonOpts& opt, bool lambda_given) {
    Code code = build_code(load_set(opt, lambda_given));
    if (opt.message_arg.empty()) throw std::invalid_argument("code encode: --message is required");
    std::vector<u64> msg = parse_u64_csv(opt.message_arg);
    std::vector<u64> word = encode(code, msg);
    ordered_json payload;
    payload["q"] = code.base.q;
    payload["word"] = word;
    payload["syndrome"] = syndrome(code, word);
    payload["check_pos"] = code.check_pos;
    emit(payload, opt, "json");
    return 0;
}

int run_code_decode(const CommonOpts& opt, bool lambda_given) {
    Code code = build_code(load_set(opt, lambda_given));
    if (opt.word_arg.empty()) throw std::invalid_argument("code decode: --word is required");
    std::vector<u64> word = parse_u64_csv(opt.word_arg);
    DecodeResult dr = decode(code, word);
    ordered_json payload;
    payload["q"] = code.base.q;
    payload["status"] = to_string(dr.status);
    payload["syndrome"] = dr.syndrome_value;
    if (dr.status == DecodeStatus::corrected) {
        payload["position"] = dr.position;
        payload["magnitude"] = dr.magnitude;
    }
    payload["word"] = dr.word;
    emit(payload, opt, "json");
    return dr.status == DecodeStatus::uncorrectable ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    CLI::App app{"b1set: modular set construction, verification, search, and single-error codes"};
    app.require_subcommand(1);
    CommonOpts opt;

    auto add_common = [&](CLI::App* sub, bool with_budget) {
        sub->add_option("--format", opt.format, "output format: json, text (tables: csv)");
        sub->add_option("--out", opt.out, "also write the payload to this file");
        if (with_budget) {
            sub->add_option("--oracle-budget-nodes", opt.budget_nodes,
                            "search node budget (default 1e8)");
            sub->add_option("--oracle-budget-secs", opt.budget_secs,
                            "search time budget in seconds (default 300; <=0 disables)");
        }
    };

    CLI::App* c_construct = app.add_subcommand("construct", "build a set for modulus q");
    c_construct->add_option("--q", opt.q, "modulus")->required();
    c_construct->add_option("--lambda", opt.lambda, "must be 4 (constructions are lambda-4)");
    c_construct->add_option("--base-file", opt.base_files, "extra base set file (repeatable)");
    add_common(c_construct, true);

    CLI::App* c_verify = app.add_subcommand("verify", "check the defining property of a set");
    c_verify->add_option("--q", opt.q, "modulus (required for inline sets)");
    c_verify->add_option("--lambda", opt.lambda, "product range bound");
    c_verify->add_option("--set", opt.set_arg, "set file or inline comma-separated elements")
        ->required();
    add_common(c_verify, false);

    CLI::App* c_search = app.add_subcommand("search", "exact maximum set search");
    c_search->add_option("--q", opt.q, "modulus")->required();
    c_search->add_option("--lambda", opt.lambda, "product range bound");
    add_common(c_search, true);

    CLI::App* c_msize = app.add_subcommand("msize", "constructed size and exactness for q");
    c_msize->add_option("--q", opt.q, "modulus")->required();
    c_msize->add_option("--base-file", opt.base_files, "extra base set file (repeatable)");
    add_common(c_msize, true);

    CLI::App* c_table = app.add_subcommand("table", "search-vs-prediction tables");
    c_table->add_option("--mode", opt.mode, "conjecture (q=12r) or formula (q=3r)")->required();
    c_table->add_option("--r", opt.r_list, "comma-separated r values, each coprime to 6")
        ->required();
    add_common(c_table, true);

    CLI::App* c_code = app.add_subcommand("code", "single-error code operations");
    c_code->require_subcommand(1);
    CLI::App* c_build = c_code->add_subcommand("build", "build a code and report its shape");
    CLI::App* c_encode = c_code->add_subcommand("encode", "systematic encode");
    CLI::App* c_decode = c_code->add_subcommand("decode", "syndrome decode");
    for (CLI::App* sub : {c_build, c_encode, c_decode}) {
        sub->add_option("--set", opt.set_arg, "set file or inline elements")->required();
        sub->add_option("--q", opt.q, "modulus (required for inline sets)");
        sub->add_option("--lambda", opt.lambda, "product range bound");
        add_common(sub, false);
    }
    c_encode->add_option("--message", opt.message_arg, "comma-separated message symbols");
    c_decode->add_option("--word", opt.word_arg, "comma-separated received word");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_construct)) return run_construct(opt);
        if (app.got_subcommand(c_verify)) return run_verify(opt, c_verify->count("--lambda") > 0);
        if (app.got_subcommand(c_search)) return run_search(opt);
        if (app.got_subcommand(c_msize)) return run_msize(opt);
        if (app.got_subcommand(c_table)) return run_table(opt);
        if (app.got_subcommand(c_code)) {
            if (c_code->got_subcommand(c_build))
                return run_code_build(opt, c_build->count("--lambda") > 0);
            if (c_code->got_subcommand(c_encode))
                return run_code_encode(opt, c_encode->count("--lambda") > 0);
            if (c_code->got_subcommand(c_decode))
                return run_code_decode(opt, c_decode->count("--lambda") > 0);
        }
        std::cerr << "error: no command selected\n";
        return 2;
    } catch (const provider_error& e) {
        std::cerr << "error: " << e.what() << " (sub-modulus " << e.sub_q << ")\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
