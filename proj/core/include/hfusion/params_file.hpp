#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hfusion/trainer.hpp"

namespace hfusion {

// Trained model file, little-endian:
//
//   "MMPM" | u16 version (1)
//   u8 inner, outer, final slot op | u8 head variant
//   u32 d_text_first, d_text_second, d_image_raw | u32 masked modality bits
//   f64 dropout_p
//   u32 kernel length | kernel values (f32)
//   u32 linear layer count (3, or 4 with the extra layer; order layer1,
//       layer2, [extra,] layer3), each: u32 in, u32 out, weights (f32,
//       row-major out x in), bias (f32)
//
// Gradient buffers are not stored.
inline constexpr std::uint8_t kParamsMagic[4] = {'M', 'M', 'P', 'M'};
inline constexpr std::uint16_t kParamsVersion = 1;

std::vector<std::uint8_t> encode_model(const TrainedModel& model);
/// Throws FormatError with the byte offset of the first bad field.
TrainedModel decode_model(std::span<const std::uint8_t> bytes);

void write_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel read_model(const std::filesystem::path& path);

}  // namespace hfusion
