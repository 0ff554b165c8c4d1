#include "hfusion/model.hpp"

namespace hfusion {

std::string_view to_string(HeadVariant v) noexcept {
    switch (v) {
        case HeadVariant::Basic: return "basic";
        case HeadVariant::WithDropout: return "dropout";
        case HeadVariant::WithMoreLayers: return "more-layers";
    }
    return "?";
}

HeadVariant parse_head_variant(std::string_view text) {
    if (text == "basic") return HeadVariant::Basic;
    if (text == "dropout" || text == "with-dropout") return HeadVariant::WithDropout;
    if (text == "more-layers" || text == "with-more-layers") return HeadVariant::WithMoreLayers;
    throw ConfigError("unknown head variant '" + std::string(text) +
                      "' (expected basic, dropout or more-layers)");
}

std::string_view dropout_layer_name(HeadVariant v) noexcept {
    switch (v) {
        case HeadVariant::WithDropout: return "fusion";
        case HeadVariant::WithMoreLayers: return "extra";
        case HeadVariant::Basic: break;
    }
    return "none";
}

void HeadConfig::validate() const {
    if (num_classes == 0) throw ConfigError("number of classes must be positive");
    if (hidden1 == 0 || hidden2 == 0 || extra == 0) {
        throw ConfigError("hidden layer widths must be positive");
    }
    require_dropout_rate(dropout_p);
    if (adapter_kernel == 0 || adapter_kernel % 2 == 0) {
        throw ConfigError("adapter kernel length must be odd");
    }
}

std::vector<ParamView> optimizer_views(ModelParams<float>& params) {
    std::vector<ParamView> views;
    for (auto& s : parameter_slots(params)) {
        views.push_back({s.name, s.value, std::span<const float>(s.grad)});
    }
    return views;
}

ModelParams<float> init_model(const FusionPlan& plan, const HeadConfig& head,
                              std::uint64_t seed) {
    head.validate();
    ModelParams<float> p;
    p.adapter = ImageAdapter<float>(plan.d_image_raw, plan.d_adapter, head.adapter_kernel);
    p.head.variant = head.variant;
    p.head.dropout_p = head.variant == HeadVariant::Basic ? 0.0 : head.dropout_p;
    p.head.layer1 = LinearLayer<float>(plan.d_fused, head.hidden1);
    p.head.layer2 = LinearLayer<float>(head.hidden1, head.hidden2);
    std::size_t last = head.hidden2;
    if (head.variant == HeadVariant::WithMoreLayers) {
        p.head.extra = LinearLayer<float>(head.hidden2, head.extra);
        last = head.extra;
    }
    p.head.layer3 = LinearLayer<float>(last, head.num_classes);

    SeededRng rng(seed, "init");
    init_uniform(p.adapter, rng);
    init_uniform(p.head.layer1, rng);
    init_uniform(p.head.layer2, rng);
    if (p.head.extra) init_uniform(*p.head.extra, rng);
    init_uniform(p.head.layer3, rng);
    return p;
}

ModalityMask parse_modality_mask(std::string_view text) {
    if (text.empty() || text == "none") return ModalityMask::none();
    if (text == "text-only") return ModalityMask::image();
    if (text == "image-only") return ModalityMask::all_text();
    unsigned bits = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('+', start), text.size());
        const std::string_view item = text.substr(start, end - start);
        if (item == "title_f") bits |= static_cast<unsigned>(Modality::TitleFirst);
        else if (item == "title_c") bits |= static_cast<unsigned>(Modality::TitleSecond);
        else if (item == "desc_f") bits |= static_cast<unsigned>(Modality::DescFirst);
        else if (item == "desc_c") bits |= static_cast<unsigned>(Modality::DescSecond);
        else if (item == "text") bits |= ModalityMask::all_text().bits();
        else if (item == "image") bits |= static_cast<unsigned>(Modality::Image);
        else throw ConfigError("unknown modality '" + std::string(item) + "' in mask");
        start = end + 1;
    }
    return ModalityMask{bits};
}

std::string to_string(ModalityMask mask) {
    if (mask.empty()) return "none";
    if (mask == ModalityMask::image()) return "text-only";
    if (mask == ModalityMask::all_text()) return "image-only";
    static constexpr std::pair<Modality, const char*> kNames[] = {
        {Modality::TitleFirst, "title_f"}, {Modality::TitleSecond, "title_c"},
        {Modality::DescFirst, "desc_f"},   {Modality::DescSecond, "desc_c"},
        {Modality::Image, "image"}};
    std::string out;
    for (const auto& [m, name] : kNames) {
        if (!mask.masks(m)) continue;
        if (!out.empty()) out += '+';
        out += name;
    }
    return out;
}

}  // namespace hfusion
