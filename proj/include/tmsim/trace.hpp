#pragma once

#include <string>
#include <vector>

namespace tmsim {

// Uniformly or non-uniformly sampled signal with axis metadata.  Used for
// nutation traces (t_us vs intensity_rel), hole-burning spectra (offset_MHz vs
// transmission), echo datasets and decay curves.
struct Trace {
    std::string x_label, y_label;  // column names carrying units, e.g. "t_us"
    std::vector<double> x, y;
    std::vector<std::string> warnings;

    size_t size() const { return x.size(); }
};

}  // namespace tmsim
