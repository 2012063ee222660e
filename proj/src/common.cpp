#include "sgc/common.hpp"

namespace sgc {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::empty_region: return "empty_region";
        case ErrorKind::insufficient_points: return "insufficient_points";
        case ErrorKind::no_consensus: return "no_consensus";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::insufficient_corpus: return "insufficient_corpus";
        case ErrorKind::degenerate_variance: return "degenerate_variance";
        case ErrorKind::non_finite: return "non_finite";
        case ErrorKind::schema: return "schema";
        case ErrorKind::io: return "io";
        case ErrorKind::generation: return "generation";
        case ErrorKind::unevaluable: return "unevaluable";
    }
    return "unknown";
}

}  // namespace sgc
