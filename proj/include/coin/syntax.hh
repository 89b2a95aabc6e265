#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coin {

struct SourcePos {
    int line = 1;
    int column = 1;
};

/// Any lexical, syntactic or semantic problem in CoIn, formula or never-claim text.
class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string &message);
    SourcePos pos() const { return pos_; }
    const std::string &message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

enum class TokenKind { Ident, Int, Symbol, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::uint64_t value = 0; // Int only
    SourcePos pos;

    bool is(std::string_view sym) const { return kind == TokenKind::Symbol && text == sym; }
    bool is_word(std::string_view w) const { return kind == TokenKind::Ident && text == w; }
};

/// Splits text into identifiers, decimal integers and the punctuation
///   ( ) { } [ ] , ; - -> ! && ||
/// `//` starts a comment running to the end of the line.
std::vector<Token> tokenize(std::string_view text);

std::string describe(const Token &t);

/// Cursor over a token vector with the expect-style helpers shared by all parsers.
class TokenStream {
public:
    explicit TokenStream(std::string_view text) : tokens_(tokenize(text)) {}

    const Token &peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token &next() {
        const Token &t = peek();
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == TokenKind::End; }

    bool accept(std::string_view sym);
    bool accept_word(std::string_view word);
    const Token &expect(std::string_view sym);
    const Token &expect_word(std::string_view word);
    const Token &expect_ident(std::string_view what = "identifier");
    const Token &expect_int(std::string_view what = "integer");

    [[noreturn]] void fail(const std::string &message) const { throw ParseError(peek().pos, message); }
    [[noreturn]] void unexpected(std::string_view wanted) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

bool is_identifier(std::string_view s);

} // namespace coin
