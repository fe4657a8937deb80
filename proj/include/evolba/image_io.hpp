// Image file I/O: 8-bit RGB PNG and the EVB1 raw format
// ("EVB1" magic, u32 width, u32 height, then 3*w*h little-endian float32,
// row-major and channel-interleaved).
#pragma once

#include <string>

#include "evolba/tensor.hpp"

namespace evolba {

ImageTensor load_png(const std::string& path);   // [0,255] -> [0,1] by /255
void save_png(const std::string& path, const ImageTensor& img);

ImageTensor load_evb1(const std::string& path);
void save_evb1(const std::string& path, const ImageTensor& img);

// Dispatches on file extension (.png vs .evb1).
ImageTensor load_image(const std::string& path);

}  // namespace evolba
