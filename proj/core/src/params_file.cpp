#include "hfusion/params_file.hpp"

#include <bit>
#include <string>

#include "hfusion/embedding_file.hpp"
#include "hfusion/errors.hpp"

namespace hfusion {
namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
    void floats(std::span<const float> v) {
        for (float x : v) f32(x);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    void le(std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

    std::size_t offset() const noexcept { return at_; }
    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(le(8)); }
    void floats(std::span<float> out) {
        need(4 * out.size());
        for (auto& x : out) x = f32();
    }
    void finish() const {
        if (at_ != b_.size()) throw FormatError("trailing bytes in model file", at_);
    }

private:
    void need(std::size_t n) const {
        if (b_.size() - at_ < n) throw FormatError("model file truncated", b_.size());
    }
    std::uint64_t le(int bytes) {
        need(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b_[at_ + i]) << (8 * i);
        at_ += static_cast<std::size_t>(bytes);
        return v;
    }
    std::span<const std::uint8_t> b_;
    std::size_t at_ = 0;
};

void write_layer(Writer& w, const LinearLayer<float>& l) {
    w.u32(static_cast<std::uint32_t>(l.in_dim()));
    w.u32(static_cast<std::uint32_t>(l.out_dim()));
    w.floats(l.weight.values());
    w.floats(l.bias.values());
}

LinearLayer<float> read_layer(Reader& r) {
    const std::uint32_t in = r.u32();
    const std::uint32_t out = r.u32();
    if (in == 0 || out == 0) throw FormatError("linear layer with a zero dimension", r.offset() - 8);
    LinearLayer<float> l(in, out);
    r.floats(l.weight.values());
    r.floats(l.bias.values());
    return l;
}

FusionOp op_from_byte(std::uint8_t b, std::size_t offset) {
    if (b > 2) throw FormatError("bad fusion operator code " + std::to_string(b), offset);
    return static_cast<FusionOp>(b);
}

}  // namespace

std::vector<std::uint8_t> encode_model(const TrainedModel& model) {
    const auto& p = model.params;
    Writer w;
    for (auto c : kParamsMagic) w.u8(c);
    w.u16(kParamsVersion);
    w.u8(static_cast<std::uint8_t>(model.plan.inner_op));
    w.u8(static_cast<std::uint8_t>(model.plan.outer_op));
    w.u8(static_cast<std::uint8_t>(model.plan.final_op));
    w.u8(static_cast<std::uint8_t>(p.head.variant));
    w.u32(static_cast<std::uint32_t>(model.plan.d_text_first));
    w.u32(static_cast<std::uint32_t>(model.plan.d_text_second));
    w.u32(static_cast<std::uint32_t>(model.plan.d_image_raw));
    w.u32(model.mask.bits());
    w.f64(p.head.dropout_p);
    w.u32(static_cast<std::uint32_t>(p.adapter.kernel.dim()));
    w.floats(p.adapter.kernel.values());
    w.u32(p.head.extra ? 4u : 3u);
    write_layer(w, p.head.layer1);
    write_layer(w, p.head.layer2);
    if (p.head.extra) write_layer(w, *p.head.extra);
    write_layer(w, p.head.layer3);
    return w.take();
}

TrainedModel decode_model(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    for (std::size_t i = 0; i < 4; ++i) {
        if (r.u8() != kParamsMagic[i]) throw FormatError("bad model file magic", i);
    }
    if (r.u16() != kParamsVersion) throw FormatError("unsupported model file version", 4);

    PlanConfig pc;
    pc.inner = op_from_byte(r.u8(), 6);
    pc.outer = op_from_byte(r.u8(), 7);
    pc.final = op_from_byte(r.u8(), 8);
    const std::uint8_t variant = r.u8();
    if (variant > 2) throw FormatError("bad head variant code", 9);
    pc.d_text = r.u32();
    pc.d_text_second = r.u32();
    pc.d_image_raw = r.u32();

    TrainedModel m;
    try {
        m.plan = build_plan(pc);
    } catch (const Error& e) {
        throw FormatError(std::string("stored plan is invalid: ") + e.what(), 6);
    }
    m.mask = ModalityMask{r.u32()};
    auto& p = m.params;
    p.head.variant = static_cast<HeadVariant>(variant);
    p.head.dropout_p = r.f64();

    const std::size_t kernel_at = r.offset();
    const std::uint32_t k = r.u32();
    try {
        p.adapter = ImageAdapter<float>(m.plan.d_image_raw, m.plan.d_adapter, k);
    } catch (const Error& e) {
        throw FormatError(e.what(), kernel_at);
    }
    r.floats(p.adapter.kernel.values());

    const std::size_t count_at = r.offset();
    const std::uint32_t layers = r.u32();
    const bool more = p.head.variant == HeadVariant::WithMoreLayers;
    if (layers != (more ? 4u : 3u)) throw FormatError("layer count does not match variant", count_at);
    p.head.layer1 = read_layer(r);
    p.head.layer2 = read_layer(r);
    if (more) p.head.extra = read_layer(r);
    p.head.layer3 = read_layer(r);
    r.finish();
    try {
        require_compatible(m.plan, p);
    } catch (const ShapeError& e) {
        throw FormatError(std::string("layer shapes disagree with the plan: ") + e.what(), count_at);
    }
    return m;
}

void write_model(const std::filesystem::path& path, const TrainedModel& model) {
    write_file_bytes(path, encode_model(model));
}

TrainedModel read_model(const std::filesystem::path& path) {
    return decode_model(read_file_bytes(path));
}

}  // namespace hfusion
