#pragma once

#include <vector>

namespace hdtk {

namespace detail {

template <class F>
void for_each_word(int letters, int len, std::vector<int>& buf, F&& f) {
    buf.assign(len, 0);
    while (true) {
        f(buf);
        int i = len - 1;
        while (i >= 0 && buf[i] == letters - 1) buf[i--] = 0;
        if (i < 0) return;
        ++buf[i];
    }
}

}  // namespace detail

template <class F>
void for_each_lasso(int letters, int max_prefix, int max_cycle, F&& f) {
    LassoWord w;
    std::vector<int> u, v;
    for (int lu = 0; lu <= max_prefix; ++lu)
        detail::for_each_word(letters, lu, u, [&](const std::vector<int>& pu) {
            for (int lv = 1; lv <= max_cycle; ++lv)
                detail::for_each_word(letters, lv, v, [&](const std::vector<int>& pv) {
                    w.prefix = pu;
                    w.cycle = pv;
                    f(static_cast<const LassoWord&>(w));
                });
        });
}

}  // namespace hdtk
