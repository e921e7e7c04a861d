#include "betaplane/errors.hpp"

namespace betaplane {

void throw_precondition(const std::string& what) { throw PreconditionError(what); }

}  // namespace betaplane
