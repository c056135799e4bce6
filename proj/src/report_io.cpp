#include "hyprobin/report_io.hpp"

#include "hyprobin/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace hyprobin::io {

namespace {

const char* kColumns[] = {"schema",    "domain_id",    "theorem",     "orientation", "seed",
                          "beta",      "lambda_omega", "lambda_star", "perimeter",   "vol_omega",
                          "vol_star",  "radius_star",  "v_extreme",   "l2_sq",       "lhs",
                          "rhs",       "margin",       "fem_error",   "kappa_min",   "passed",
                          "status"};
constexpr std::size_t kColumnCount = std::size(kColumns);

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ContractError("not a number: '" + std::string(text) + "'");
    return v;
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted)
        throw ContractError("unterminated quoted CSV field");
    return fields;
}

void write_report_csv(std::ostream& out, std::span<const verify::DeficitReport> reports,
                      std::uint64_t seed)
{
    for (std::size_t i = 0; i < kColumnCount; ++i)
        out << (i ? "," : "") << kColumns[i];
    out << "\r\n";
    for (const auto& r : reports) {
        out << kReportSchema << ',' << csv_field(r.domain_id) << ','
            << verify::theorem_name(r.theorem) << ',' << verify::orientation(r.theorem) << ','
            << seed;
        for (double v : {r.beta, r.lambda_omega, r.lambda_star, r.perimeter, r.vol_omega,
                         r.vol_star, r.radius_star, r.v_extreme, r.l2_sq, r.lhs, r.rhs, r.margin,
                         r.fem_error, r.kappa_min})
            out << ',' << format_double(v);
        out << ',' << (r.passed ? "true" : "false") << ',' << csv_field(r.status) << "\r\n";
    }
}

std::vector<verify::DeficitReport> read_report_csv(std::istream& in)
{
    std::vector<verify::DeficitReport> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != kColumnCount)
            throw ContractError("report row has " + std::to_string(f.size()) + " fields, expected " +
                                std::to_string(kColumnCount));
        if (header) {
            header = false;
            continue;
        }
        if (f[0] != kReportSchema)
            throw ContractError("unknown report schema '" + f[0] + "'");
        verify::DeficitReport r;
        r.domain_id = f[1];
        r.theorem = f[2] == "thm1" ? verify::Theorem::deficit_negative
                                   : verify::Theorem::deficit_positive;
        double* targets[] = {&r.beta,      &r.lambda_omega, &r.lambda_star, &r.perimeter,
                             &r.vol_omega, &r.vol_star,     &r.radius_star, &r.v_extreme,
                             &r.l2_sq,     &r.lhs,          &r.rhs,         &r.margin,
                             &r.fem_error, &r.kappa_min};
        for (std::size_t i = 0; i < std::size(targets); ++i)
            *targets[i] = parse_double(f[5 + i]);
        r.passed = f[19] == "true";
        r.status = f[20];
        out.push_back(std::move(r));
    }
    return out;
}

void write_report_json(std::ostream& out, std::span<const verify::DeficitReport> reports,
                       std::uint64_t seed)
{
    // non-finite values have no JSON literal; they become null
    auto num = [](double v) -> nlohmann::json {
        if (!std::isfinite(v))
            return nullptr;
        return v;
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"schema", kReportSchema},
                       {"domain_id", r.domain_id},
                       {"theorem", verify::theorem_name(r.theorem)},
                       {"orientation", verify::orientation(r.theorem)},
                       {"seed", seed},
                       {"beta", num(r.beta)},
                       {"lambda_omega", num(r.lambda_omega)},
                       {"lambda_star", num(r.lambda_star)},
                       {"perimeter", num(r.perimeter)},
                       {"vol_omega", num(r.vol_omega)},
                       {"vol_star", num(r.vol_star)},
                       {"radius_star", num(r.radius_star)},
                       {"v_extreme", num(r.v_extreme)},
                       {"l2_sq", num(r.l2_sq)},
                       {"lhs", num(r.lhs)},
                       {"rhs", num(r.rhs)},
                       {"margin", num(r.margin)},
                       {"fem_error", num(r.fem_error)},
                       {"kappa_min", num(r.kappa_min)},
                       {"passed", r.passed},
                       {"status", r.status}});
    }
    out << arr.dump(2) << '\n';
}

void write_comparison_csv(std::ostream& out, const verify::ComparisonTable& table)
{
    out << "t,P_inner,P_ball,margin\r\n";
    for (const auto& r : table.rows)
        out << format_double(r.t) << ',' << format_double(r.perimeter) << ','
            << format_double(r.ball_perimeter) << ',' << format_double(r.margin) << "\r\n";
}

void write_lemma_csv(std::ostream& out, const verify::LemmaTable& table)
{
    out << "t,P,minus_dPdt,af_rhs,margin\r\n";
    for (const auto& r : table.rows)
        out << format_double(r.t) << ',' << format_double(r.perimeter) << ','
            << format_double(r.minus_dpdt) << ',' << format_double(r.af_rhs) << ','
            << format_double(r.margin) << "\r\n";
}

} // namespace hyprobin::io
