#include "svsim/embedding.hpp"

#include <string>

#include "svsim/errors.hpp"
#include "svsim/rng.hpp"

namespace svsim {

DenseVector seeded_gaussian_embedding(std::string_view seed_string, std::size_t dims) {
    if (dims != 50 && dims != 128 && dims != 512 && dims != 768) {
        throw ConfigError("seeded_gaussian_embedding: unsupported dims " + std::to_string(dims));
    }
    RngStream stream = RngStream::from_string(seed_string);
    DenseVector out(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        out[i] = stream.normal();
    }
    return out;
}

} // namespace svsim
