#include "spinflip/errors.hpp"

#include <sstream>

namespace spinflip {

namespace {
std::string describe(double time, double residual) {
  std::ostringstream os;
  os << "non-cancellable field singularity at t = " << time
     << " ns (numerator residual " << residual << ")";
  return os.str();
}
}  // namespace

SingularityError::SingularityError(double time, double residual)
    : std::runtime_error(describe(time, residual)), time_(time), residual_(residual) {}

}  // namespace spinflip
