#include "leakwise/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace leakwise {

std::size_t thread_budget() {
    std::size_t budget = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LEAKWISE_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) budget = std::min(budget, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
            // unparseable values leave the default in place
        }
    }
    return budget;
}

}  // namespace leakwise
