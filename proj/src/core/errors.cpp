#include "lavlab/errors.hpp"

namespace lavlab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::argument: return "argument";
        case ErrorKind::domain: return "domain";
        case ErrorKind::lookup: return "lookup";
        case ErrorKind::singular_point: return "singular_point";
        case ErrorKind::contract: return "contract";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

}  // namespace lavlab
