// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_VECWAVE_HPP
#define VECWAVE_VECWAVE_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/vector_basis_1d.hpp"
#include "vecwave/tensor_multiwavelet.hpp"
#include "vecwave/vector_basis_nd.hpp"
#include "vecwave/vtransform.hpp"
#include "vecwave/io.hpp"
#include "vecwave/verify.hpp"

#endif // VECWAVE_VECWAVE_HPP
