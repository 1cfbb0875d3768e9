#include <cctype>
#include <string>

#include "idemlift/algebra.hpp"

namespace idemlift {

namespace {

// Recursive-descent reader for `name(arg, ...)` where each arg is an integer or a nested descriptor.
class DescriptorReader {
public:
    explicit DescriptorReader(std::string_view text) : text_(text) {}

    AlgebraDescriptor read_all() {
        AlgebraDescriptor d = read();
        skip_space();
        if (pos_ != text_.size()) error("trailing characters");
        return d;
    }

private:
    struct Arg {
        bool is_int = false;
        int value = 0;
        AlgebraDescriptor nested;
    };

    AlgebraDescriptor read() {
        skip_space();
        const std::string name = read_word();
        if (name.empty()) error("expected an algebra name");
        skip_space();
        expect('(');
        std::vector<Arg> args;
        skip_space();
        if (peek() != ')') {
            for (;;) {
                args.push_back(read_arg());
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect(')');
        return assemble(name, args);
    }

    Arg read_arg() {
        skip_space();
        Arg a;
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
            std::size_t start = pos_;
            if (text_[pos_] == '-') ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string digits(text_.substr(start, pos_ - start));
            if (digits == "-") error("malformed integer");
            a.is_int = true;
            a.value = std::stoi(digits);
        } else {
            a.nested = read();
        }
        return a;
    }

    AlgebraDescriptor assemble(const std::string& name, const std::vector<Arg>& args) {
        AlgebraDescriptor d;
        auto ints = [&](std::size_t count) {
            if (args.size() != count) error(name + " expects " + std::to_string(count) + " integer argument(s)");
            for (const auto& a : args)
                if (!a.is_int) error(name + " expects integer arguments");
        };
        if (name == "matrix") {
            ints(1);
            d.kind = AlgebraKind::matrix;
            d.n = args[0].value;
        } else if (name == "dual") {
            ints(1);
            d.kind = AlgebraKind::dual;
            d.n = args[0].value;
        } else if (name == "block") {
            ints(2);
            d.kind = AlgebraKind::block_triangular;
            d.n = args[0].value;
            d.m = args[1].value;
        } else if (name == "convolution") {
            ints(1);
            d.kind = AlgebraKind::convolution;
            d.grid = args[0].value;
        } else if (name == "wiener") {
            if (args.size() != 2 || args[0].is_int == args[1].is_int)
                error("wiener expects a degree and a base algebra");
            d.kind = AlgebraKind::wiener;
            const Arg& deg = args[0].is_int ? args[0] : args[1];
            const Arg& base = args[0].is_int ? args[1] : args[0];
            d.degree = deg.value;
            d.children.push_back(base.nested);
        } else if (name == "unitization") {
            if (args.size() != 1 || args[0].is_int) error("unitization expects one algebra");
            d.kind = AlgebraKind::unitization;
            d.children.push_back(args[0].nested);
        } else if (name == "product") {
            if (args.empty()) error("product expects at least one factor");
            d.kind = AlgebraKind::product;
            for (const auto& a : args) {
                if (a.is_int) error("product expects algebra factors");
                d.children.push_back(a.nested);
            }
        } else {
            error("unknown algebra '" + name + "'");
        }
        return d;
    }

    std::string read_word() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void expect(char c) {
        skip_space();
        if (peek() != c) error(std::string("expected '") + c + "'");
        ++pos_;
    }
    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorCode::config_error,
             "algebra descriptor '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

AlgebraDescriptor parse_algebra_descriptor(std::string_view text) { return DescriptorReader(text).read_all(); }

}  // namespace idemlift
