#include "classforge/budgets.hpp"

#include <cstdlib>

namespace classforge {

const Budgets& Budgets::from_env() {
    static Budgets b = [] {
        Budgets out;
        if (const char* env = std::getenv("CLASSFORGE_BUDGET")) {
            long long scale = std::atoll(env);
            if (scale > 0) {
                out.max_classes = long(scale);
                out.max_r3 = scale * 100;
                out.max_abs_disc = scale * 200000;
            }
        }
        return out;
    }();
    return b;
}

} // namespace classforge
