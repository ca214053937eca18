#include "blender/certstore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace blender {

namespace {

void put_iv(std::ostream& out, const char* name, Interval v)
{
    out << name << ' ' << to_hex(v.lo()) << ' ' << to_hex(v.hi()) << '\n';
}

void put_real(std::ostream& out, const char* name, double v) { out << name << ' ' << to_hex(v) << '\n'; }

void put_poly(std::ostream& out, const RPoly& p)
{
    out << ' ' << p.degree();
    for (const Interval& c : p.coeffs()) {
        out << ' ' << to_hex(c.lo()) << ' ' << to_hex(c.hi());
    }
}

class Reader
{
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next line split on whitespace; blank lines are not allowed.
    std::vector<std::string> next(const char* expecting)
    {
        std::string line;
        if (!std::getline(in_, line)) {
            throw FormatError(std::string("unexpected end of file, expected ") + expecting, line_ + 1);
        }
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) {
            tok.push_back(std::move(t));
        }
        if (tok.empty()) {
            fail(std::string("empty line, expected ") + expecting);
        }
        return tok;
    }

    std::vector<std::string> keyed(const char* key, std::size_t nargs)
    {
        auto tok = next(key);
        if (tok[0] != key) {
            fail("expected '" + std::string(key) + "', found '" + tok[0] + "'");
        }
        if (tok.size() != nargs + 1) {
            fail("'" + std::string(key) + "' takes " + std::to_string(nargs) + " value(s)");
        }
        return tok;
    }

    double real(const std::string& s) const
    {
        double v = 0.0;
        try {
            v = parse_hex(s);
        } catch (const FormatError& e) {
            fail(e.what());
        }
        if (!std::isfinite(v)) {
            fail("non-finite value '" + s + "'");
        }
        return v;
    }

    Interval iv(const std::string& lo, const std::string& hi) const
    {
        const double a = real(lo), b = real(hi);
        if (a > b) {
            fail("interval with lo > hi");
        }
        return Interval(a, b);
    }

    long long integer(const std::string& s, long long min, long long max) const
    {
        long long v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            fail("malformed integer '" + s + "'");
        }
        if (v < min || v > max) {
            fail("integer " + s + " out of range");
        }
        return v;
    }

    Interval iv_field(const char* key)
    {
        auto t = keyed(key, 2);
        return iv(t[1], t[2]);
    }

    double real_field(const char* key)
    {
        auto t = keyed(key, 1);
        return real(t[1]);
    }

    int int_field(const char* key)
    {
        auto t = keyed(key, 1);
        return static_cast<int>(integer(t[1], 0, 1'000'000));
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, line_); }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

constexpr long long kMaxDegree = 128;
constexpr long long kMaxCount = 1LL << 40;

RPoly read_poly(Reader& r, const std::vector<std::string>& tok, std::size_t& pos)
{
    if (pos >= tok.size()) {
        r.fail("truncated curve record");
    }
    const auto deg = static_cast<std::size_t>(r.integer(tok[pos++], 0, kMaxDegree));
    if (tok.size() < pos + 2 * (deg + 1)) {
        r.fail("truncated curve record");
    }
    std::vector<Interval> c;
    c.reserve(deg + 1);
    for (std::size_t i = 0; i <= deg; ++i, pos += 2) {
        c.push_back(r.iv(tok[pos], tok[pos + 1]));
    }
    return RPoly(std::move(c));
}

} // namespace

void save(const Certificate& c, std::ostream& out)
{
    const Model& m = c.model;
    out << "BLENDER-CERT " << kCertVersion << '\n';
    out << "PARAMS\n";
    put_iv(out, "a", m.par.a);
    put_iv(out, "b", m.par.b);
    put_iv(out, "c", m.par.c);
    put_iv(out, "xi", m.par.xi);
    put_real(out, "eps_y", m.tube.eps_y);
    put_real(out, "eps_z", m.tube.eps_z);
    put_real(out, "eps_z_hat", m.tube.eps_z_hat);
    put_real(out, "delta", m.tube.delta);
    out << "n " << m.tube.n << '\n';
    out << "k " << m.tube.k << '\n';
    out << "N " << m.tube.nodes << '\n';
    put_real(out, "y0", m.tube.y0);
    put_real(out, "T_margin", m.tube.t_margin);
    out << "domain_check " << (m.tube.domain_check == DomainCheck::tube ? "tube" : "curve") << '\n';
    put_iv(out, "I", m.box.I);
    put_iv(out, "y_range", m.box.y_range);
    put_iv(out, "z_range", m.box.z_range);

    out << "CURVES " << c.curves.size() << '\n';
    for (std::size_t i = 0; i < c.curves.size(); ++i) {
        out << "CURVE " << i;
        put_poly(out, c.curves[i].py);
        put_poly(out, c.curves[i].pz);
        out << '\n';
    }
    out << "MAPS " << c.maps.size() << '\n';
    for (const MapRecord& r : c.maps) {
        out << "MAP " << r.parent << ' ' << r.slot << ' ' << r.target << ' ' << to_hex(r.T.lo()) << ' '
            << to_hex(r.T.hi()) << '\n';
    }
    out << "END\n";
}

void save(const Certificate& c, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw BlenderError("cannot open " + path.string() + " for writing");
    }
    save(c, out);
    if (!out.flush()) {
        throw BlenderError("write to " + path.string() + " failed");
    }
}

Certificate load(std::istream& in)
{
    Reader r(in);
    Certificate c;
    {
        auto t = r.next("header");
        if (t[0] != "BLENDER-CERT" || t.size() != 2) {
            r.fail("missing BLENDER-CERT header");
        }
        if (t[1] != std::to_string(kCertVersion)) {
            r.fail("unsupported certificate version " + t[1]);
        }
    }
    r.keyed("PARAMS", 0);
    Model& m = c.model;
    m.par.a = r.iv_field("a");
    m.par.b = r.iv_field("b");
    m.par.c = r.iv_field("c");
    m.par.xi = r.iv_field("xi");
    m.tube.eps_y = r.real_field("eps_y");
    m.tube.eps_z = r.real_field("eps_z");
    m.tube.eps_z_hat = r.real_field("eps_z_hat");
    m.tube.delta = r.real_field("delta");
    m.tube.n = r.int_field("n");
    m.tube.k = r.int_field("k");
    m.tube.nodes = r.int_field("N");
    m.tube.y0 = r.real_field("y0");
    m.tube.t_margin = r.real_field("T_margin");
    {
        auto t = r.keyed("domain_check", 1);
        if (t[1] == "curve") {
            m.tube.domain_check = DomainCheck::curve;
        } else if (t[1] == "tube") {
            m.tube.domain_check = DomainCheck::tube;
        } else {
            r.fail("domain_check must be 'curve' or 'tube'");
        }
    }
    m.box.I = r.iv_field("I");
    m.box.y_range = r.iv_field("y_range");
    m.box.z_range = r.iv_field("z_range");
    if (m.tube.n < 1) {
        r.fail("n must be positive");
    }
    if (m.tube.nodes < 2 || m.tube.nodes > kMaxDegree + 1) {
        r.fail("N out of range");
    }

    const auto ncurves = static_cast<std::size_t>(r.integer(r.keyed("CURVES", 1)[1], 0, kMaxCount));
    c.curves.reserve(std::min<std::size_t>(ncurves, 1 << 20));
    for (std::size_t i = 0; i < ncurves; ++i) {
        auto tok = r.next("CURVE");
        if (tok[0] != "CURVE") {
            r.fail("truncated CURVES section (expected " + std::to_string(ncurves) + " curves)");
        }
        if (tok.size() < 2 || static_cast<std::size_t>(r.integer(tok[1], 0, kMaxCount)) != i) {
            r.fail("curve ids must be 0, 1, 2, ... in order");
        }
        std::size_t pos = 2;
        RPoly py = read_poly(r, tok, pos);
        RPoly pz = read_poly(r, tok, pos);
        if (pos != tok.size()) {
            r.fail("trailing values in curve record");
        }
        c.curves.push_back({std::move(py), std::move(pz)});
    }

    const auto nmaps = static_cast<std::size_t>(r.integer(r.keyed("MAPS", 1)[1], 0, kMaxCount));
    const std::size_t maps_line = r.line();
    const auto n = static_cast<std::size_t>(m.tube.n);
    if (nmaps != n * ncurves) {
        throw FormatError("MAPS count " + std::to_string(nmaps) + " is not n x curve count = " +
                              std::to_string(n * ncurves),
                          maps_line);
    }
    c.maps.reserve(nmaps);
    for (std::size_t i = 0; i < nmaps; ++i) {
        auto tok = r.next("MAP");
        if (tok[0] != "MAP") {
            r.fail("truncated MAPS section (expected " + std::to_string(nmaps) + " records)");
        }
        if (tok.size() != 6) {
            r.fail("MAP takes 5 values");
        }
        MapRecord rec;
        rec.parent = static_cast<std::size_t>(r.integer(tok[1], 0, kMaxCount));
        rec.slot = static_cast<int>(r.integer(tok[2], 0, m.tube.n - 1));
        rec.target = static_cast<std::size_t>(r.integer(tok[3], 0, kMaxCount));
        rec.T = r.iv(tok[4], tok[5]);
        if (rec.parent >= ncurves || rec.target >= ncurves) {
            r.fail("curve index out of range (" + std::to_string(ncurves) + " curves)");
        }
        if (rec.parent != i / n || static_cast<std::size_t>(rec.slot) != i % n) {
            r.fail("MAP records must be ordered by (parent, slot)");
        }
        c.maps.push_back(rec);
    }
    r.keyed("END", 0);
    std::string rest;
    while (std::getline(in, rest)) {
        if (rest.find_first_not_of(" \t\r") != std::string::npos) {
            throw FormatError("content after END", r.line() + 1);
        }
    }
    return c;
}

Certificate load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return load(in);
}

} // namespace blender
