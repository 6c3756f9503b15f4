#include "thermoweld/io/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "thermoweld/core.hpp"

namespace tw {

namespace {

struct TensorShape {
    std::vector<std::uint32_t> dims;
    std::size_t count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
};

/// Shapes in for_each_tensor order for a given variant.
std::vector<TensorShape> expected_shapes(nn::ModelVariant variant) {
    std::vector<TensorShape> shapes;
    const auto ch = nn::Cnn<float>::conv_channels(variant);
    int hw = nn::kInputHW;
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        shapes.push_back({{static_cast<std::uint32_t>(ch[i + 1]), static_cast<std::uint32_t>(ch[i]),
                           3, 3}});
        shapes.push_back({{static_cast<std::uint32_t>(ch[i + 1])}});
        hw /= 2;
    }
    const std::uint32_t flat = static_cast<std::uint32_t>(hw * hw * ch.back());
    const std::uint32_t hidden = static_cast<std::uint32_t>(nn::Cnn<float>::hidden_dim(variant));
    shapes.push_back({{hidden, flat}});
    shapes.push_back({{hidden}});
    shapes.push_back({{static_cast<std::uint32_t>(nn::kNumClasses), hidden}});
    shapes.push_back({{static_cast<std::uint32_t>(nn::kNumClasses)}});
    return shapes;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const nn::Cnn<float>& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path.string());

    out.write("TWMD", 4);
    const std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint8_t variant = static_cast<std::uint8_t>(model.variant);
    const std::uint8_t bypass = model.relu_bypass ? 1 : 0;
    const std::uint16_t reserved = 0;
    out.write(reinterpret_cast<const char*>(&variant), 1);
    out.write(reinterpret_cast<const char*>(&bypass), 1);
    out.write(reinterpret_cast<const char*>(&reserved), 2);

    const auto shapes = expected_shapes(model.variant);
    const std::uint32_t n_tensors = static_cast<std::uint32_t>(shapes.size());
    out.write(reinterpret_cast<const char*>(&n_tensors), 4);
    for (const auto& s : shapes) {
        const std::uint32_t rank = static_cast<std::uint32_t>(s.dims.size());
        out.write(reinterpret_cast<const char*>(&rank), 4);
        out.write(reinterpret_cast<const char*>(s.dims.data()),
                  static_cast<std::streamsize>(s.dims.size() * 4));
    }

    std::size_t ti = 0;
    model.for_each_tensor([&](const std::vector<float>& t) {
        if (ti < shapes.size() && t.size() != shapes[ti].count())
            throw DataError("save_checkpoint: tensor shape mismatch");
        out.write(reinterpret_cast<const char*>(t.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(float)));
        ++ti;
    });
    if (!out) throw DataError("save_checkpoint: short write: " + path.string());
}

nn::Cnn<float> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());

    char magic[5] = {};
    in.read(magic, 4);
    if (std::string(magic) != "TWMD") throw DataError("bad checkpoint magic: " + path.string());
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1) throw DataError("unsupported checkpoint version: " + path.string());
    std::uint8_t variant_b = 0, bypass = 0;
    std::uint16_t reserved = 0;
    in.read(reinterpret_cast<char*>(&variant_b), 1);
    in.read(reinterpret_cast<char*>(&bypass), 1);
    in.read(reinterpret_cast<char*>(&reserved), 2);
    if (variant_b > 1) throw DataError("unknown model variant in checkpoint");
    const auto variant = static_cast<nn::ModelVariant>(variant_b);

    std::uint32_t n_tensors = 0;
    in.read(reinterpret_cast<char*>(&n_tensors), 4);
    const auto shapes = expected_shapes(variant);
    if (n_tensors != shapes.size()) throw DataError("checkpoint tensor count mismatch");
    for (const auto& s : shapes) {
        std::uint32_t rank = 0;
        in.read(reinterpret_cast<char*>(&rank), 4);
        if (rank != s.dims.size()) throw DataError("checkpoint tensor rank mismatch");
        std::vector<std::uint32_t> dims(rank);
        in.read(reinterpret_cast<char*>(dims.data()), static_cast<std::streamsize>(rank * 4));
        if (dims != s.dims) throw DataError("checkpoint tensor shape mismatch");
    }

    Rng dummy(0);
    nn::Cnn<float> model = nn::Cnn<float>::he_init(variant, dummy);
    model.relu_bypass = bypass != 0;
    model.for_each_tensor([&](std::vector<float>& t) {
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.size() * sizeof(float)));
    });
    if (!in) throw DataError("truncated checkpoint: " + path.string());
    return model;
}

}  // namespace tw
