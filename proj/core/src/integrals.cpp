#include "swucc/integrals.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace swucc {

namespace {

std::size_t tri(std::size_t hi, std::size_t lo) { return hi * (hi + 1) / 2 + lo; }

std::size_t pair_index(int p, int q) {
    return p >= q ? tri(static_cast<std::size_t>(p), static_cast<std::size_t>(q))
                  : tri(static_cast<std::size_t>(q), static_cast<std::size_t>(p));
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("FCIDUMP parse error at line " + std::to_string(line_no) + ": " +
                             what);
}

}  // namespace

IntegralStore::IntegralStore(int n_orbitals, int n_electrons, int ms2, double core_energy)
    : n_orbitals_(n_orbitals), n_electrons_(n_electrons), ms2_(ms2), core_energy_(core_energy) {
    if (n_orbitals < 1 || n_orbitals > kMaxOrbitals)
        throw std::invalid_argument("orbital count must be in [1, 32], got " +
                                    std::to_string(n_orbitals));
    if (n_electrons < 1 || n_electrons > 2 * n_orbitals)
        throw std::invalid_argument("electron count must be in (0, 2M], got " +
                                    std::to_string(n_electrons));
    if ((n_electrons + ms2) % 2 != 0 || n_alpha() < 0 || n_beta() < 0 ||
        n_alpha() > n_orbitals || n_beta() > n_orbitals)
        throw std::invalid_argument("inconsistent NELEC/MS2 pair");
    one_electron_.assign(static_cast<std::size_t>(n_orbitals) * n_orbitals, 0.0);
    const std::size_t npair = pair_index(n_orbitals - 1, n_orbitals - 1) + 1;
    two_electron_.assign(tri(npair - 1, npair - 1) + 1, 0.0);
}

std::size_t IntegralStore::canonical_index(int p, int q, int r, int s) const {
    assert(p >= 0 && p < n_orbitals_ && q >= 0 && q < n_orbitals_);
    assert(r >= 0 && r < n_orbitals_ && s >= 0 && s < n_orbitals_);
    const std::size_t pq = pair_index(p, q);
    const std::size_t rs = pair_index(r, s);
    return pq >= rs ? tri(pq, rs) : tri(rs, pq);
}

void IntegralStore::set_h1(int p, int q, double value) {
    one_electron_[static_cast<std::size_t>(p) * n_orbitals_ + q] = value;
    one_electron_[static_cast<std::size_t>(q) * n_orbitals_ + p] = value;
}

void IntegralStore::set_eri(int p, int q, int r, int s, double value) {
    two_electron_[canonical_index(p, q, r, s)] = value;
}

double get_one_electron(const IntegralStore& store, int p, int q) {
    if (p < 1 || p > store.n_orbitals() || q < 1 || q > store.n_orbitals())
        throw std::out_of_range("one-electron index out of range");
    return store.h1(p - 1, q - 1);
}

double get_two_electron(const IntegralStore& store, int p, int q, int r, int s) {
    for (const int x : {p, q, r, s})
        if (x < 1 || x > store.n_orbitals())
            throw std::out_of_range("two-electron index out of range");
    return store.eri(p - 1, q - 1, r - 1, s - 1);
}

OrbitalEnergies orbital_energies(const IntegralStore& store, const Determinant& reference) {
    const int m = store.n_orbitals();
    const std::uint64_t occ = reference.spin_orbital_word();
    OrbitalEnergies out;
    out.eps.resize(2 * static_cast<std::size_t>(m));
    for (int s = 0; s < 2 * m; ++s) {
        const int ps = s >> 1;
        double e = store.h1(ps, ps);
        for (int t = 0; t < 2 * m; ++t) {
            if (!(occ >> t & 1)) continue;
            const int pt = t >> 1;
            e += store.eri(ps, ps, pt, pt);
            if ((s & 1) == (t & 1)) e -= store.eri(ps, pt, pt, ps);
        }
        out.eps[s] = e;
    }
    return out;
}

double max_offdiagonal_fock(const IntegralStore& store, const Determinant& reference) {
    const int m = store.n_orbitals();
    const std::uint64_t occ = reference.spin_orbital_word();
    double worst = 0.0;
    for (int s = 0; s < 2 * m; ++s) {
        for (int t = s + 1; t < 2 * m; ++t) {
            if ((s & 1) != (t & 1)) continue;  // Fock is spin-diagonal
            const int ps = s >> 1, pt = t >> 1;
            double f = store.h1(ps, pt);
            for (int u = 0; u < 2 * m; ++u) {
                if (!(occ >> u & 1)) continue;
                const int pu = u >> 1;
                f += store.eri(ps, pt, pu, pu);
                if ((s & 1) == (u & 1)) f -= store.eri(ps, pu, pu, pt);
            }
            worst = std::max(worst, std::abs(f));
        }
    }
    return worst;
}

namespace {

struct HeaderFields {
    int norb = -1;
    int nelec = -1;
    int ms2 = 0;
};

// Parses `KEY=value[,value...]` pairs from the accumulated header text.
HeaderFields parse_header(const std::string& text, std::size_t line_of_end) {
    HeaderFields fields;
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    std::size_t pos = 0;
    auto read_int_after = [&](std::size_t eq) -> long {
        std::size_t start = eq + 1;
        while (start < upper.size() && std::isspace(static_cast<unsigned char>(upper[start])))
            ++start;
        std::size_t end = start;
        if (end < upper.size() && (upper[end] == '+' || upper[end] == '-')) ++end;
        while (end < upper.size() && std::isdigit(static_cast<unsigned char>(upper[end]))) ++end;
        if (end == start) parse_fail(line_of_end, "expected integer in header");
        return std::stol(upper.substr(start, end - start));
    };
    auto find_key = [&](const std::string& key) -> std::size_t {
        std::size_t at = 0;
        while ((at = upper.find(key, at)) != std::string::npos) {
            const std::size_t after = at + key.size();
            const bool boundary_before =
                at == 0 || !std::isalnum(static_cast<unsigned char>(upper[at - 1]));
            std::size_t eq = after;
            while (eq < upper.size() && std::isspace(static_cast<unsigned char>(upper[eq]))) ++eq;
            if (boundary_before && eq < upper.size() && upper[eq] == '=') return eq;
            at = after;
        }
        return std::string::npos;
    };
    pos = find_key("NORB");
    if (pos == std::string::npos) parse_fail(line_of_end, "header missing NORB");
    fields.norb = static_cast<int>(read_int_after(pos));
    pos = find_key("NELEC");
    if (pos == std::string::npos) parse_fail(line_of_end, "header missing NELEC");
    fields.nelec = static_cast<int>(read_int_after(pos));
    pos = find_key("MS2");
    if (pos != std::string::npos) fields.ms2 = static_cast<int>(read_int_after(pos));
    // ORBSYM and ISYM are accepted but carry no meaning here.
    return fields;
}

}  // namespace

IntegralStore parse_fcidump(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    // locate the header opener
    std::string header_text;
    bool opened = false, closed = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        const auto first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        trimmed = trimmed.substr(first);
        if (!opened) {
            if (trimmed.rfind("&FCI", 0) == 0 || trimmed.rfind("$FCI", 0) == 0) {
                opened = true;
                header_text += trimmed.substr(4);
                header_text += '\n';
            } else {
                parse_fail(line_no, "expected &FCI header");
            }
        } else {
            header_text += trimmed;
            header_text += '\n';
        }
        // terminator may share a line with header fields
        for (const char* term : {"&END", "$END", "/"}) {
            const auto at = header_text.find(term);
            if (at != std::string::npos) {
                header_text.erase(at);
                closed = true;
                break;
            }
        }
        if (closed) break;
    }
    if (!opened) parse_fail(line_no, "missing &FCI header");
    if (!closed) parse_fail(line_no, "header never terminated by &END, $END or /");

    const HeaderFields fields = parse_header(header_text, line_no);
    if (fields.norb < 1) parse_fail(line_no, "NORB must be positive");
    if (fields.norb > kMaxOrbitals)
        parse_fail(line_no, "NORB = " + std::to_string(fields.norb) + " exceeds the 32-orbital cap");
    IntegralStore store = [&] {
        try {
            return IntegralStore(fields.norb, fields.nelec, fields.ms2);
        } catch (const std::invalid_argument& e) {
            parse_fail(line_no, e.what());
        }
    }();

    const int norb = fields.norb;
    while (std::getline(in, line)) {
        ++line_no;
        // Fortran-style D exponents
        for (auto& c : line)
            if (c == 'D' || c == 'd') c = 'e';
        std::istringstream is(line);
        double value;
        long i, j, k, l;
        if (!(is >> value)) {
            std::string probe;
            std::istringstream blank(line);
            if (!(blank >> probe)) continue;  // blank line
            parse_fail(line_no, "non-numeric integral value");
        }
        if (!(is >> i >> j >> k >> l)) parse_fail(line_no, "expected four indices");
        std::string extra;
        if (is >> extra) parse_fail(line_no, "trailing tokens after indices");
        for (const long x : {i, j, k, l})
            if (x < 0 || x > norb)
                parse_fail(line_no, "index " + std::to_string(x) + " out of range [0, " +
                                        std::to_string(norb) + "]");
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            store.set_core_energy(value);
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0) parse_fail(line_no, "one-electron record with a zero index");
            store.set_h1(static_cast<int>(i) - 1, static_cast<int>(j) - 1, value);
        } else if (i != 0 && j != 0 && k != 0 && l != 0) {
            store.set_eri(static_cast<int>(i) - 1, static_cast<int>(j) - 1,
                          static_cast<int>(k) - 1, static_cast<int>(l) - 1, value);
        } else {
            parse_fail(line_no, "unsupported zero-index pattern");
        }
    }
    return store;
}

IntegralStore parse_fcidump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);
    return parse_fcidump(in);
}

void write_fcidump(const IntegralStore& store, std::ostream& out) {
    const int m = store.n_orbitals();
    out << "&FCI NORB=" << m << ",NELEC=" << store.n_electrons() << ",MS2=" << store.ms2()
        << ",\n  ORBSYM=";
    for (int p = 0; p < m; ++p) out << "1,";
    out << "\n  ISYM=1,\n &END\n";
    char buf[96];
    const auto record = [&](double v, int i, int j, int k, int l) {
        std::snprintf(buf, sizeof(buf), " % .16E %4d %4d %4d %4d\n", v, i, j, k, l);
        out << buf;
    };
    for (int p = 0; p < m; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (tri(r, s) > tri(p, q)) continue;
                    const double v = store.eri(p, q, r, s);
                    if (v != 0.0) record(v, p + 1, q + 1, r + 1, s + 1);
                }
    for (int p = 0; p < m; ++p)
        for (int q = 0; q <= p; ++q) {
            const double v = store.h1(p, q);
            if (v != 0.0) record(v, p + 1, q + 1, 0, 0);
        }
    record(store.core_energy(), 0, 0, 0, 0);
}

IntegralStore window_orbitals(const IntegralStore& store, int keep) {
    if (keep < 1 || keep > store.n_orbitals())
        throw std::invalid_argument("window size must be in [1, n_orbitals]");
    if (store.n_electrons() > 2 * keep)
        throw std::invalid_argument("window of " + std::to_string(keep) +
                                    " orbitals cannot hold " +
                                    std::to_string(store.n_electrons()) + " electrons");
    IntegralStore out(keep, store.n_electrons(), store.ms2(), store.core_energy());
    for (int p = 0; p < keep; ++p)
        for (int q = 0; q <= p; ++q) out.set_h1(p, q, store.h1(p, q));
    for (int p = 0; p < keep; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (tri(r, s) > tri(p, q)) continue;
                    out.set_eri(p, q, r, s, store.eri(p, q, r, s));
                }
    return out;
}

}  // namespace swucc
