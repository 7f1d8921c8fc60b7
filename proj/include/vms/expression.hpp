#pragma once

#include "vms/common.hpp"

#include <memory>

namespace vms {

class ExpressionError : public ConfigError {
public:
    ExpressionError(std::size_t position, const std::string& what)
        : ConfigError(what + " at position " + std::to_string(position)), position_(position) {}
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Scalar arithmetic over x, y, z, t. Supports + - * / ^, unary minus,
/// parentheses, the constants pi and e, the functions sin cos tan exp log
/// sqrt abs tanh sinh cosh and the two-argument min max pow.
class Expression {
public:
    Expression();
    [[nodiscard]] static Expression parse(const std::string& text);
    [[nodiscard]] static Expression constant(double value);

    [[nodiscard]] double operator()(double x, double y, double z, double t) const;
    [[nodiscard]] double operator()(const Vec3& p, double t) const { return (*this)(p[0], p[1], p[2], t); }
    [[nodiscard]] const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Comma-separated component expressions; missing trailing components are
/// zero. Throws when more than three are given.
[[nodiscard]] VectorField parse_vector_field(const std::string& text);

}  // namespace vms
