#include "coin/syntax.hh"

#include <cctype>
#include <limits>

namespace coin {

ParseError::ParseError(SourcePos pos, const std::string &message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos),
      message_(message) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s[0]))
        return false;
    for (char c : s)
        if (!ident_char(c))
            return false;
    return true;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.pos = pos;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
                ++j;
            t.kind = TokenKind::Ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            std::uint64_t v = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                if (v > (std::numeric_limits<std::uint32_t>::max() - 9) / 10)
                    throw ParseError(pos, "integer literal too large");
                v = v * 10 + std::uint64_t(text[j] - '0');
                ++j;
            }
            if (j < text.size() && ident_char(text[j]))
                throw ParseError(pos, "malformed number");
            t.kind = TokenKind::Int;
            t.value = v;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else {
            std::string_view two = text.substr(i, 2);
            t.kind = TokenKind::Symbol;
            if (two == "->" || two == "&&" || two == "||") {
                t.text = std::string(two);
                advance(2);
            } else if (std::string_view("(){}[],;-!").find(c) != std::string_view::npos) {
                t.text = std::string(1, c);
                advance(1);
            } else {
                throw ParseError(pos, std::string("unexpected character '") + c + "'");
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = pos;
    out.push_back(end);
    return out;
}

std::string describe(const Token &t) {
    switch (t.kind) {
    case TokenKind::End:
        return "end of input";
    case TokenKind::Int:
        return "number " + t.text;
    case TokenKind::Ident:
        return "'" + t.text + "'";
    case TokenKind::Symbol:
        return "'" + t.text + "'";
    }
    return "?";
}

bool TokenStream::accept(std::string_view sym) {
    if (!peek().is(sym))
        return false;
    next();
    return true;
}

bool TokenStream::accept_word(std::string_view word) {
    if (!peek().is_word(word))
        return false;
    next();
    return true;
}

void TokenStream::unexpected(std::string_view wanted) const {
    fail("expected " + std::string(wanted) + ", found " + describe(peek()));
}

const Token &TokenStream::expect(std::string_view sym) {
    if (!peek().is(sym))
        unexpected("'" + std::string(sym) + "'");
    return next();
}

const Token &TokenStream::expect_word(std::string_view word) {
    if (!peek().is_word(word))
        unexpected("'" + std::string(word) + "'");
    return next();
}

const Token &TokenStream::expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Ident)
        unexpected(what);
    return next();
}

const Token &TokenStream::expect_int(std::string_view what) {
    if (peek().kind != TokenKind::Int)
        unexpected(what);
    return next();
}

} // namespace coin
