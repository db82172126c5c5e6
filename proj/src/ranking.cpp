#include "dsrec/ranking.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dsrec/errors.hpp"

namespace dsrec {

std::string format_trec_run(const Run& run) {
    std::string out;
    char score_buf[64];
    for (const auto& [qid, ranking] : run.rankings) {
        std::size_t rank = 1;
        for (const auto& entry : ranking) {
            std::snprintf(score_buf, sizeof(score_buf), "%.6f", entry.score);
            out += qid;
            out += " Q0 ";
            out += entry.id;
            out += ' ';
            out += std::to_string(rank++);
            out += ' ';
            out += score_buf;
            out += ' ';
            out += run.tag;
            out += '\n';
        }
    }
    return out;
}

void write_trec_run(const Run& run, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write run file: " + path);
    out << format_trec_run(run);
}

Run read_trec_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read run file: " + path);
    Run run;
    run.tag.clear();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string qid, q0, doc_id, tag;
        long rank = 0;
        double score = 0.0;
        if (!(fields >> qid >> q0 >> doc_id >> rank >> score >> tag)) {
            throw DataError("bad run line " + std::to_string(line_no) + " in " + path);
        }
        run.rankings[qid].push_back({doc_id, score});
        if (run.tag.empty()) run.tag = tag;
    }
    if (run.tag.empty()) run.tag = "run";
    return run;
}

}  // namespace dsrec
