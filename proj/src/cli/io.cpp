#include "orbq/cli/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "orbq/error.hpp"
#include "orbq/lattice/fixtures.hpp"

namespace fs = std::filesystem;

namespace orbq::cli
{

namespace
{

struct Token
{
    std::string text;
    long line, col;
};

std::vector<Token> tokenize(const std::string &text)
{
    std::vector<Token> out;
    long line = 1, col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n')
                ++i;
            continue;
        }
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '[' || ch == ']') {
            ++col;
            ++i;
            continue;
        }
        Token t{"", line, col};
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',' &&
               text[i] != ']' && text[i] != '#') {
            t.text += text[i++];
            ++col;
        }
        out.push_back(std::move(t));
    }
    return out;
}

[[noreturn]] void fail(const std::string &origin, const Token &t, const std::string &msg)
{
    throw ParseError(origin + ":" + std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
}

RatMatrix parse_square(const std::string &text, const std::string &origin)
{
    auto toks = tokenize(text);
    if (toks.empty())
        throw ParseError(origin + ":1:1: empty input, expected the dimension");
    long d = 0;
    try {
        std::size_t used = 0;
        d = std::stol(toks[0].text, &used);
        if (used != toks[0].text.size() || d < 0)
            throw std::invalid_argument("dim");
    } catch (const std::exception &) {
        fail(origin, toks[0], "expected a nonnegative dimension, got '" + toks[0].text + "'");
    }
    std::size_t need = std::size_t(d) * std::size_t(d);
    if (toks.size() - 1 < need) {
        Token last = toks.back();
        fail(origin, last, "matrix has " + std::to_string(toks.size() - 1) + " of " + std::to_string(need) + " entries");
    }
    if (toks.size() - 1 > need)
        fail(origin, toks[need + 1], "unexpected token '" + toks[need + 1].text + "' after the matrix");
    RatMatrix m(d, d);
    for (std::size_t k = 0; k < need; ++k) {
        const Token &t = toks[k + 1];
        try {
            m(k / d, k % d) = parse_rational(t.text);
        } catch (const std::exception &) {
            fail(origin, t, "not a rational number: '" + t.text + "'");
        }
    }
    return m;
}

} // namespace

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GramLattice parse_gram_text(const std::string &text, const std::string &origin)
{
    return GramLattice(parse_square(text, origin));
}

GramLattice parse_gram_file(const fs::path &path) { return parse_gram_text(read_file(path), path.string()); }

IntMatrix parse_matrix_text(const std::string &text, const std::string &origin)
{
    RatMatrix m = parse_square(text, origin);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_integer(m(i, j)))
                throw ParseError(origin + ": automorphism entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") is not an integer");
    return to_integer(m);
}

IntMatrix parse_matrix_file(const fs::path &path) { return parse_matrix_text(read_file(path), path.string()); }

std::string write_gram(const GramLattice &L) { return L.to_string(); }

std::string write_matrix(const IntMatrix &A)
{
    std::ostringstream os;
    os << A.rows() << "\n";
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j)
            os << (j ? " " : "") << A(i, j).get_str();
        os << "\n";
    }
    return os.str();
}

void write_file_atomic(const fs::path &path, const std::string &content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw ValidationFailed("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

GramLattice resolve_lattice(const std::string &ref, const fs::path &base)
{
    const std::string prefix = "fixture:";
    if (ref.rfind(prefix, 0) == 0)
        return named_lattice(ref.substr(prefix.size()));
    fs::path p = ref;
    if (p.is_relative() && !base.empty())
        p = base / p;
    return parse_gram_file(p);
}

IntMatrix resolve_automorphism(const std::string &ref, std::size_t dim, const fs::path &base)
{
    if (ref == "identity" || ref == "minus_identity") {
        IntMatrix A = IntMatrix::identity(dim);
        if (ref == "minus_identity")
            for (std::size_t i = 0; i < dim; ++i)
                A(i, i) = -1;
        return A;
    }
    fs::path p = ref;
    if (p.is_relative() && !base.empty())
        p = base / p;
    IntMatrix A = parse_matrix_file(p);
    if (A.rows() != dim)
        throw ValidationFailed("automorphism " + p.string() + " has size " + std::to_string(A.rows()) +
                               ", lattice has dimension " + std::to_string(dim));
    return A;
}

std::vector<Rational> parse_rational_list(const std::vector<std::string> &items)
{
    std::vector<Rational> out;
    for (const auto &s : items) {
        try {
            out.push_back(parse_rational(s));
        } catch (const std::exception &) {
            throw ParseError("not a rational number: '" + s + "'");
        }
    }
    return out;
}

} // namespace orbq::cli
