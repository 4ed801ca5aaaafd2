#ifndef KUROSH_TEXT_FORMAT_HPP
#define KUROSH_TEXT_FORMAT_HPP

// Text grammar for presentations, words and generator lists.
//
//   presentation := factor ("," factor)*        factor := "Z" | "Z^" int
//   word         := syllable+ | "1"
//   syllable     := "a" idx ("^" int)? | "a" idx "[" int ("," int)* "]"
//   generators   := (word (";" word)*)?
//
// Whitespace (including newlines) is insignificant between tokens. "1" is
// accepted as the identity word so that format() output always re-parses.

#include "kurosh/words.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kurosh {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

namespace detail {

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() != c)
            return false;
        advance();
        return true;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    BigInt integer()
    {
        skip_ws();
        bool neg = false;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            neg = text_[pos_] == '-';
            advance();
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer");
        BigInt v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            advance();
        }
        return neg ? BigInt(-v) : v;
    }

    int small_positive(const char* what)
    {
        const int line = line_, col = col_;
        BigInt v = integer();
        if (v < 1 || v > 1000000)
            throw ParseError(std::string(what) + " must be a positive integer", line, col);
        return static_cast<int>(v);
    }

    [[noreturn]] void fail(const std::string& msg)
    {
        skip_ws();
        throw ParseError(msg, line_, col_);
    }

    int line() const { return line_; }
    int column() const { return col_; }
    std::size_t pos() const { return pos_; }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

inline Word parse_word_at(Scanner& sc, const Presentation& p)
{
    std::vector<Syllable> seq;
    if (sc.peek() == '1') {
        sc.expect('1');
        return {};
    }
    if (sc.peek() != 'a')
        sc.fail("expected syllable 'a<index>'");
    while (sc.peek() == 'a') {
        sc.expect('a');
        const int line = sc.line(), col = sc.column();
        const int idx = sc.small_positive("factor index");
        if (idx > p.size())
            throw ParseError("factor index a" + std::to_string(idx) + " exceeds presentation size " +
                                 std::to_string(p.size()),
                             line, col);
        const int f = idx - 1;
        const int rank = p.rank_of(f);
        Syllable s{f, {}};
        if (sc.accept('[')) {
            s.letter.push_back(sc.integer());
            while (sc.accept(','))
                s.letter.push_back(sc.integer());
            sc.expect(']');
            if (static_cast<int>(s.letter.size()) != rank)
                throw ParseError("letter of a" + std::to_string(idx) + " needs " + std::to_string(rank) +
                                     " coordinates",
                                 line, col);
        } else {
            if (rank != 1)
                throw ParseError("factor a" + std::to_string(idx) + " is Z^" + std::to_string(rank) +
                                     "; use a" + std::to_string(idx) + "[...]",
                                 line, col);
            BigInt e = 1;
            if (sc.accept('^'))
                e = sc.integer();
            s.letter.push_back(e);
        }
        seq.push_back(std::move(s));
    }
    return reduce(seq);
}

} // namespace detail

inline Presentation parse_presentation(std::string_view text)
{
    detail::Scanner sc(text);
    Presentation p;
    do {
        if (!sc.accept('Z'))
            sc.fail("expected factor 'Z' or 'Z^k'");
        FactorType f;
        if (sc.accept('^'))
            f.rank = sc.small_positive("factor rank");
        p.factors.push_back(f);
    } while (sc.accept(','));
    if (!sc.at_end())
        sc.fail("unexpected trailing input in presentation");
    return p;
}

inline Word parse_word(std::string_view text, const Presentation& p)
{
    detail::Scanner sc(text);
    Word w = detail::parse_word_at(sc, p);
    if (!sc.at_end())
        sc.fail("unexpected trailing input in word");
    return w;
}

inline std::vector<Word> parse_generators(std::string_view text, const Presentation& p)
{
    detail::Scanner sc(text);
    std::vector<Word> out;
    if (sc.at_end())
        return out;
    do {
        out.push_back(detail::parse_word_at(sc, p));
    } while (sc.accept(';'));
    if (!sc.at_end())
        sc.fail("expected ';' between generators");
    return out;
}

/// Comma-separated permutation of 1..n, returned 0-based.
inline std::vector<int> parse_permutation(std::string_view text, int n)
{
    detail::Scanner sc(text);
    std::vector<int> perm;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    do {
        const int line = sc.line(), col = sc.column();
        const int v = sc.small_positive("permutation entry");
        if (v > n || seen[static_cast<std::size_t>(v - 1)])
            throw ParseError("not a permutation of 1.." + std::to_string(n), line, col);
        seen[static_cast<std::size_t>(v - 1)] = true;
        perm.push_back(v - 1);
    } while (sc.accept(','));
    if (!sc.at_end())
        sc.fail("unexpected trailing input in permutation");
    if (static_cast<int>(perm.size()) != n)
        throw ParseError("permutation must list all of 1.." + std::to_string(n), sc.line(), sc.column());
    return perm;
}

inline std::string format(const Presentation& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
        if (i)
            out += ",";
        out += p.factors[i].rank == 1 ? "Z" : "Z^" + std::to_string(p.factors[i].rank);
    }
    return out;
}

inline std::string format(const FactorElement& x)
{
    std::string out = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            out += ",";
        out += x[i].str();
    }
    return out + "]";
}

inline std::string format(const Word& w)
{
    if (w.empty())
        return "1";
    std::string out;
    for (const auto& s : w.syllables) {
        if (!out.empty())
            out += " ";
        out += "a" + std::to_string(s.factor + 1);
        if (s.letter.size() == 1) {
            if (s.letter[0] != 1)
                out += "^" + s.letter[0].str();
        } else {
            out += format(s.letter);
        }
    }
    return out;
}

inline std::string format(const std::vector<Word>& gens)
{
    std::string out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i)
            out += " ; ";
        out += format(gens[i]);
    }
    return out;
}

inline std::string format(const FactorSubgroup& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.basis().size(); ++i) {
        if (i)
            out += ",";
        out += format(s.basis()[i]);
    }
    return out + "}";
}

} // namespace kurosh

#endif
