#pragma once

#include "tsvd/linalg.hpp"
#include "tsvd/tensor.hpp"

#include <array>

namespace tsvd {

using Ranks3 = std::array<std::size_t, 3>;

/// Core tensor plus one orthonormal basis per mode.
struct TuckerFactors {
    Tensor3 core;
    std::array<OrthonormalBasis, 3> bases;

    TuckerFactors() = default;
    TuckerFactors(Tensor3 s, std::array<OrthonormalBasis, 3> u)
        : core(std::move(s)), bases(std::move(u)) {
        for (int k = 0; k < 3; ++k)
            detail::require(static_cast<std::size_t>(bases[k].r()) == core.dims()[k],
                            "TuckerFactors: core dims must match basis column counts");
    }

    [[nodiscard]] Tensor3 compose() const {
        return tucker_compose(core, bases[0].matrix(), bases[1].matrix(), bases[2].matrix());
    }
};

}  // namespace tsvd
