#include "surrogate/error.hpp"

namespace surrogate {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::shape: return "shape";
    case ErrorKind::data: return "data";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::contract: return "contract";
    }
    return "unknown";
}

} // namespace surrogate
