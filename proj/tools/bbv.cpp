// Batch verification entry point: pick q values and checkers, run them,
// and emit a deterministic report in json, csv or text form.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "bbv/theorems.hpp"

using namespace bbv;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bruck-Bose verification suite for PG(2,q^2) in PG(4,q)"};
    std::string q_arg = "3";
    std::vector<std::string> primpoly_args;
    std::string suite = "all";
    std::string mode_arg = "exhaustive";
    unsigned samples = 200;
    unsigned long long seed = 0;
    std::string format = "text";
    std::string out_path;
    unsigned jobs = 1;
    bool timings = false;
    bool list_only = false;
    app.add_option("--q", q_arg, "comma separated prime powers");
    app.add_option("--primpoly", primpoly_args,
                   "override primitive polynomial, e.g. 7:1,4 for x^2-x-4");
    app.add_option("--suite", suite, "checker ids (comma separated) or 'all'");
    app.add_option("--mode", mode_arg, "exhaustive or sampled");
    app.add_option("--samples", samples, "instances per checker in sampled mode");
    app.add_option("--seed", seed, "seed for sampled mode");
    app.add_option("--format", format, "json, csv or text");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--jobs", jobs, "worker threads");
    app.add_flag("--timings", timings, "include elapsed_ms in json/csv output");
    app.add_flag("--list", list_only, "list registered checker ids and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\n";
        return 2;
    }

    if (list_only) {
        for (const auto& id : registered_ids()) std::cout << id << "\n";
        return 0;
    }

    // ---- validate configuration
    std::vector<u32> qs;
    for (const std::string& tok : split_commas(q_arg)) {
        u32 q = 0;
        try {
            q = static_cast<u32>(std::stoul(tok));
        } catch (...) {
            std::cerr << "error: bad q value '" << tok << "'\n";
            return 2;
        }
        if (!FieldTower::is_prime_power(q)) {
            std::cerr << "error: " << q << " is not a prime power\n";
            return 2;
        }
        if (q > 16) {
            std::cerr << "error: " << q << " exceeds the ceiling 16\n";
            return 2;
        }
        qs.push_back(q);
    }
    if (qs.empty()) {
        std::cerr << "error: empty --q list\n";
        return 2;
    }
    std::map<u32, std::pair<u32, u32>> overrides;
    for (const std::string& tok : primpoly_args) {
        auto colon = tok.find(':');
        auto comma = tok.find(',', colon);
        if (colon == std::string::npos || comma == std::string::npos) {
            std::cerr << "error: --primpoly expects q:t1,t0\n";
            return 2;
        }
        try {
            u32 q = static_cast<u32>(std::stoul(tok.substr(0, colon)));
            u32 t1 = static_cast<u32>(std::stoul(tok.substr(colon + 1, comma - colon - 1)));
            u32 t0 = static_cast<u32>(std::stoul(tok.substr(comma + 1)));
            overrides[q] = {t1, t0};
        } catch (...) {
            std::cerr << "error: --primpoly expects q:t1,t0\n";
            return 2;
        }
    }
    std::vector<std::string> ids;
    if (suite == "all") {
        ids = registered_ids();
    } else {
        for (const std::string& id : split_commas(suite)) {
            if (!is_registered(id)) {
                std::cerr << "error: unknown checker id '" << id << "'\n";
                return 2;
            }
            ids.push_back(id);
        }
    }
    if (mode_arg != "exhaustive" && mode_arg != "sampled") {
        std::cerr << "error: --mode must be exhaustive or sampled\n";
        return 2;
    }
    if (format != "json" && format != "csv" && format != "text") {
        std::cerr << "error: --format must be json, csv or text\n";
        return 2;
    }
    Mode mode;
    mode.exhaustive = mode_arg == "exhaustive";
    mode.samples = samples;
    mode.seed = seed;

    // ---- build the frames, then run the shards
    std::vector<std::unique_ptr<FieldTower>> towers;
    std::vector<std::unique_ptr<Frame>> frames;
    for (u32 q : qs) {
        try {
            auto it = overrides.find(q);
            towers.push_back(std::make_unique<FieldTower>(
                q, it == overrides.end()
                       ? std::optional<std::pair<u32, u32>>{}
                       : std::optional<std::pair<u32, u32>>(it->second)));
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        frames.push_back(std::make_unique<Frame>(*towers.back()));
    }

    struct Task {
        size_t frame_idx;
        std::string id;
    };
    std::vector<Task> tasks;
    for (const std::string& id : ids)
        for (size_t fi = 0; fi < frames.size(); ++fi) tasks.push_back({fi, id});
    std::vector<CheckRecord> records(tasks.size());
    std::mutex next_mx;
    size_t next = 0;
    auto worker = [&]() {
        while (true) {
            size_t mine;
            {
                std::lock_guard<std::mutex> lk(next_mx);
                if (next >= tasks.size()) return;
                mine = next++;
            }
            records[mine] =
                run_check(tasks[mine].id, *frames[tasks[mine].frame_idx], mode);
        }
    };
    unsigned nthreads = std::max(1u, jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // ---- assemble output (single threaded, deterministic order)
    bool any_fail = false;
    json report;
    report["version"] = "1";
    report["config"] = {
        {"q", qs},
        {"suite", suite},
        {"mode", mode_arg},
        {"samples", samples},
        {"seed", seed},
    };
    report["records"] = json::array();
    for (size_t i = 0; i < tasks.size(); ++i) {
        const CheckRecord& r = records[i];
        const FieldTower& tw = frames[tasks[i].frame_idx]->tower();
        any_fail |= r.status == Status::fail;
        json jr;
        jr["theorem_id"] = r.theorem_id;
        jr["q"] = r.q;
        jr["status"] = status_name(r.status);
        if (!r.reason.empty()) jr["reason"] = r.reason;
        if (!r.counts.empty()) jr["counts"] = r.counts;
        if (!r.witnesses.empty()) jr["witnesses"] = r.witnesses;
        if (timings) jr["elapsed_ms"] = r.elapsed_ms;
        jr["tower"] = {{"t1", tw.t1()},
                       {"t0", tw.t0()},
                       {"s1", tw.s1()},
                       {"s0", tw.s0()}};
        report["records"].push_back(std::move(jr));
    }

    std::ostringstream body;
    if (format == "json") {
        body << report.dump(2) << "\n";
    } else if (format == "csv") {
        body << "theorem_id,q,status,reason,counts,witnesses";
        if (timings) body << ",elapsed_ms";
        body << ",t1,t0,s1,s0\n";
        for (const auto& jr : report["records"]) {
            body << csv_escape(jr["theorem_id"].get<std::string>()) << ","
                 << jr["q"] << "," << jr["status"].get<std::string>() << ","
                 << csv_escape(jr.contains("reason")
                                   ? jr["reason"].get<std::string>()
                                   : "")
                 << ","
                 << csv_escape(jr.contains("counts") ? jr["counts"].dump() : "")
                 << ","
                 << csv_escape(jr.contains("witnesses") ? jr["witnesses"].dump()
                                                        : "");
            if (timings) body << "," << jr["elapsed_ms"];
            body << "," << jr["tower"]["t1"] << "," << jr["tower"]["t0"] << ","
                 << jr["tower"]["s1"] << "," << jr["tower"]["s0"] << "\n";
        }
    } else {
        size_t npass = 0, nfail = 0, nskip = 0;
        for (size_t i = 0; i < tasks.size(); ++i) {
            const CheckRecord& r = records[i];
            body << status_name(r.status) << "  " << r.theorem_id << "  q="
                 << r.q;
            if (!r.reason.empty()) body << "  [" << r.reason << "]";
            if (!r.counts.empty()) body << "  " << r.counts.dump();
            if (timings) body << "  (" << r.elapsed_ms << " ms)";
            body << "\n";
            if (r.status == Status::pass) ++npass;
            else if (r.status == Status::fail) ++nfail;
            else ++nskip;
        }
        body << "\nsummary: " << npass << " pass, " << nfail << " fail, "
             << nskip << " skip\n";
    }

    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
        f << body.str();
    }
    return any_fail ? 1 : 0;
}
