#ifndef SVSIM_EMBEDDING_HPP
#define SVSIM_EMBEDDING_HPP

#include <string_view>

#include "svsim/dense_vector.hpp"

namespace svsim {

/**
 * Synthetic embedding via seeded hashing: standard-normal entries drawn from
 * a stream keyed by the seed string. The same (seed_string, dims) always
 * produces the exact same vector, replacing real encoder inference with a
 * reproducible stand-in.
 *
 * Supported dims: 50, 128, 512, 768. Anything else throws ConfigError.
 */
DenseVector seeded_gaussian_embedding(std::string_view seed_string, std::size_t dims);

} // namespace svsim

#endif // SVSIM_EMBEDDING_HPP
