#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace vms {

using Index = std::int64_t;
using Vec3 = Eigen::Vector3d;

/// Space-time vector field. Points are always 3-vectors (z = 0 in 2D) and so
/// are the returned values; only the first `dim` components are used.
using VectorField = std::function<Vec3(const Vec3& x, double t)>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid case or boundary-condition setup.
class ConfigError : public Error {
public:
    using Error::Error;
};

void log_notice(const std::string& message);

}  // namespace vms
