#include "topots/error.hpp"

namespace topots {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage:
            return "usage error";
        case ErrorKind::data:
            return "data error";
        case ErrorKind::numerical:
            return "numerical error";
    }
    return "error";
}

}  // namespace topots
