#pragma once

#include "binofeat/image.hpp"

namespace binofeat {

// Minimum eigenvalue of the 3x3-windowed structure tensor, with gradients from
// central differences. The outer 2-pixel border (where the window would read
// outside the image) is zeroed.
ImageF32 shi_tomasi_response(const ImageF32& gray);

}  // namespace binofeat
