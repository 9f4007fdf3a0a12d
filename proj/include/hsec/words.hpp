#pragma once

#include "hsec/base.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hsec {

class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty()) throw AlphabetError("empty generator name");
            for (char c : names_[i])
                if (std::isspace(static_cast<unsigned char>(c)) || c == '^')
                    throw AlphabetError("invalid character in generator name '" + names_[i] + "'");
            if (!index_.emplace(names_[i], i).second)
                throw AlphabetError("duplicate generator name '" + names_[i] + "'");
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index(std::string_view name) const {
        auto i = find(name);
        if (!i) throw AlphabetError("unknown generator '" + std::string(name) + "'");
        return *i;
    }

    bool operator==(const Alphabet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
    return std::make_shared<const Alphabet>(std::move(names));
}

struct Letter {
    std::size_t gen;
    long long exp;
    bool operator==(const Letter&) const = default;
    auto operator<=>(const Letter&) const = default;
};

// Freely reduced word, stored as runs of a single generator.
class Word {
public:
    Word() = default;
    explicit Word(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

    static Word identity(AlphabetPtr alphabet) { return Word(std::move(alphabet)); }

    static Word generator(AlphabetPtr alphabet, std::size_t gen, long long exp = 1) {
        return reduce(std::move(alphabet), {{gen, exp}});
    }

    static Word generator(AlphabetPtr alphabet, std::string_view name, long long exp = 1) {
        std::size_t g = alphabet->index(name);
        return generator(std::move(alphabet), g, exp);
    }

    static Word reduce(AlphabetPtr alphabet, const std::vector<Letter>& raw) {
        Word w(std::move(alphabet));
        for (const Letter& l : raw) w.push(l);
        return w;
    }

    static Word reduce(AlphabetPtr alphabet, const std::vector<std::pair<std::string, long long>>& raw) {
        std::vector<Letter> letters;
        letters.reserve(raw.size());
        for (const auto& [name, e] : raw) letters.push_back({alphabet->index(name), e});
        return reduce(std::move(alphabet), letters);
    }

    static Word parse(AlphabetPtr alphabet, std::string_view text);

    const AlphabetPtr& alphabet() const { return alphabet_; }
    const std::vector<Letter>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }

    long long length() const {
        long long n = 0;
        for (const Letter& l : letters_) n += l.exp < 0 ? -l.exp : l.exp;
        return n;
    }

    Word inverse() const {
        Word w(alphabet_);
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->gen, -it->exp});
        return w;
    }

    Word operator*(const Word& o) const {
        check_same(o);
        Word w = *this;
        if (!w.alphabet_) w.alphabet_ = o.alphabet_;
        for (const Letter& l : o.letters_) w.push(l);
        return w;
    }

    Word pow(long long n) const {
        Word base = n < 0 ? inverse() : *this;
        Word out(alphabet_);
        for (long long k = 0; k < (n < 0 ? -n : n); ++k) out = out * base;
        return out;
    }

    std::vector<long long> exponent_sums() const {
        std::vector<long long> v(alphabet_ ? alphabet_->size() : 0, 0);
        for (const Letter& l : letters_) v[l.gen] += l.exp;
        return v;
    }

    std::string to_string() const {
        std::string s;
        for (const Letter& l : letters_) {
            if (!s.empty()) s += ' ';
            s += alphabet_->name(l.gen);
            if (l.exp != 1) s += "^" + std::to_string(l.exp);
        }
        return s;
    }

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator<(const Word& o) const { return letters_ < o.letters_; }

    void check_same(const Word& o) const {
        if (alphabet_ && o.alphabet_ && alphabet_ != o.alphabet_ && !(*alphabet_ == *o.alphabet_))
            throw AlphabetError("words over different alphabets");
    }

private:
    void push(const Letter& l) {
        if (alphabet_ && l.gen >= alphabet_->size()) throw AlphabetError("generator index out of range");
        if (l.exp == 0) return;
        if (!letters_.empty() && letters_.back().gen == l.gen) {
            long long e;
            if (__builtin_add_overflow(letters_.back().exp, l.exp, &e)) throw Error("exponent overflow");
            if (e == 0)
                letters_.pop_back();
            else
                letters_.back().exp = e;
        } else {
            letters_.push_back(l);
        }
    }

    AlphabetPtr alphabet_;
    std::vector<Letter> letters_;
};

inline Word Word::parse(AlphabetPtr alphabet, std::string_view text) {
    std::vector<Letter> raw;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view token = text.substr(start, i - start);
        std::size_t caret = token.find('^');
        std::string_view name = token.substr(0, caret);
        if (name.empty()) throw ParseError("missing generator name in '" + std::string(token) + "'", 1, start + 1);
        long long exp = 1;
        if (caret != std::string_view::npos) {
            std::string_view digits = token.substr(caret + 1);
            std::size_t k = 0;
            bool neg = false;
            if (k < digits.size() && (digits[k] == '-' || digits[k] == '+')) neg = digits[k++] == '-';
            if (k == digits.size()) throw ParseError("malformed exponent in '" + std::string(token) + "'", 1, start + caret + 2);
            long long value = 0;
            for (; k < digits.size(); ++k) {
                char c = digits[k];
                if (c < '0' || c > '9')
                    throw ParseError("malformed exponent in '" + std::string(token) + "'", 1, start + caret + 2);
                if (__builtin_mul_overflow(value, 10LL, &value) || __builtin_add_overflow(value, c - '0', &value))
                    throw ParseError("exponent out of range in '" + std::string(token) + "'", 1, start + caret + 2);
            }
            if (value == 0) throw ParseError("zero exponent in '" + std::string(token) + "'", 1, start + caret + 2);
            exp = neg ? -value : value;
        }
        raw.push_back({alphabet->index(name), exp});
    }
    return reduce(std::move(alphabet), raw);
}

inline Word mul(const Word& u, const Word& v) { return u * v; }
inline Word inv(const Word& u) { return u.inverse(); }
inline Word conj(const Word& g, const Word& w) { return g * w * g.inverse(); }
inline std::vector<long long> exponent_sums(const Word& w) { return w.exponent_sums(); }

// Element of the integral group ring of a free group.
class GroupRingElement {
public:
    GroupRingElement() = default;
    explicit GroupRingElement(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}

    static GroupRingElement term(const Word& w, const Integer& c = 1) {
        GroupRingElement x(w.alphabet());
        x.add(w, c);
        return x;
    }

    static GroupRingElement one(AlphabetPtr alphabet) {
        return term(Word::identity(alphabet));
    }

    void add(const Word& w, const Integer& c) {
        if (c == 0) return;
        if (!alphabet_) alphabet_ = w.alphabet();
        auto [it, fresh] = terms_.try_emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<Word, Integer>& terms() const { return terms_; }
    const AlphabetPtr& alphabet() const { return alphabet_; }
    bool is_zero() const { return terms_.empty(); }

    Integer coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Integer(0) : it->second;
    }

    Integer augmentation() const {
        Integer s = 0;
        for (const auto& [w, c] : terms_) s += c;
        return s;
    }

    GroupRingElement operator+(const GroupRingElement& o) const {
        GroupRingElement x = *this;
        if (!x.alphabet_) x.alphabet_ = o.alphabet_;
        for (const auto& [w, c] : o.terms_) x.add(w, c);
        return x;
    }

    GroupRingElement operator-() const {
        GroupRingElement x(alphabet_);
        for (const auto& [w, c] : terms_) x.terms_.emplace(w, -c);
        return x;
    }

    GroupRingElement operator-(const GroupRingElement& o) const { return *this + (-o); }

    GroupRingElement operator*(const GroupRingElement& o) const {
        GroupRingElement x(alphabet_ ? alphabet_ : o.alphabet_);
        for (const auto& [u, a] : terms_)
            for (const auto& [v, b] : o.terms_) x.add(u * v, a * b);
        return x;
    }

    friend GroupRingElement operator*(const Word& g, const GroupRingElement& x) {
        GroupRingElement y(x.alphabet_ ? x.alphabet_ : g.alphabet());
        for (const auto& [w, c] : x.terms_) y.add(g * w, c);
        return y;
    }

    GroupRingElement scaled(const Integer& k) const {
        GroupRingElement x(alphabet_);
        if (k == 0) return x;
        for (const auto& [w, c] : terms_) x.terms_.emplace(w, c * k);
        return x;
    }

    // Replace each word by the caller's canonical label for its coset and merge.
    GroupRingElement project(const std::function<Word(const Word&)>& canon) const {
        GroupRingElement x(alphabet_);
        for (const auto& [w, c] : terms_) x.add(canon(w), c);
        return x;
    }

    bool operator==(const GroupRingElement& o) const { return terms_ == o.terms_; }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            Integer a = hsec::abs(c);
            if (first)
                s += c < 0 ? "-" : "";
            else
                s += c < 0 ? " - " : " + ";
            first = false;
            std::string ws = w.empty() ? "1" : w.to_string();
            if (a != 1)
                s += a.str() + (w.empty() ? "" : "*(" + ws + ")");
            else
                s += w.letters().size() > 1 ? "(" + ws + ")" : ws;
        }
        return s;
    }

private:
    AlphabetPtr alphabet_;
    std::map<Word, Integer> terms_;
};

// Fox free derivative d w / d gen.
inline GroupRingElement fox_derivative(const Word& w, std::size_t gen) {
    const AlphabetPtr& A = w.alphabet();
    GroupRingElement out(A);
    Word prefix(A);
    for (const Letter& l : w.letters()) {
        if (l.gen == gen) {
            if (l.exp > 0) {
                Word p = prefix;
                Word a = Word::generator(A, gen);
                for (long long k = 0; k < l.exp; ++k) {
                    out.add(p, 1);
                    p = p * a;
                }
            } else {
                Word p = prefix;
                Word ainv = Word::generator(A, gen, -1);
                for (long long k = 0; k < -l.exp; ++k) {
                    p = p * ainv;
                    out.add(p, -1);
                }
            }
        }
        prefix = prefix * Word::generator(A, l.gen, l.exp);
    }
    return out;
}

inline GroupRingElement fox_derivative(const Word& w, std::string_view gen) {
    return fox_derivative(w, w.alphabet()->index(gen));
}

}  // namespace hsec
