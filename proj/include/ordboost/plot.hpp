#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include <png.h>

#include "ordboost/boosting.hpp"

namespace ordboost {

namespace detail {

struct Rgb {
    std::uint8_t r, g, b;
};

class Canvas {
public:
    Canvas(int width, int height) : width_(width), height_(height), pixels_(width * height * 3, 255) {}

    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
        auto* p = &pixels_[static_cast<std::size_t>((y * width_ + x) * 3)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    // Bresenham line.
    void line(int x0, int y0, int x1, int y1, Rgb c) {
        int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        while (true) {
            set(x0, y0, c);
            if (x0 == x1 && y0 == y1) break;
            int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void write_png(const std::filesystem::path& path) const {
        FILE* fp = std::fopen(path.c_str(), "wb");
        if (!fp) throw std::runtime_error("cannot write PNG file: " + path.string());
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info || setjmp(png_jmpbuf(png))) {
            if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
            std::fclose(fp);
            throw std::runtime_error("PNG encoding failed for " + path.string());
        }
        png_init_io(png, fp);
        png_set_IHDR(png, info, static_cast<png_uint_32>(width_), static_cast<png_uint_32>(height_), 8,
                     PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < height_; ++y)
            png_write_row(png, const_cast<png_bytep>(&pixels_[static_cast<std::size_t>(y * width_ * 3)]));
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
    }

    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_, height_;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace detail

// Basic static chart of the loss trace: train loss (blue) and, when present,
// validation loss (red) against iteration. No text or interactivity.
inline void render_loss_chart(const LossTrace& trace, const std::filesystem::path& path) {
    if (trace.records.empty()) throw std::invalid_argument("render_loss_chart: empty trace");
    constexpr int kWidth = 800, kHeight = 500, kMargin = 50;

    std::vector<double> train{trace.initial_train_loss};
    std::vector<double> validation;
    bool has_validation = true;
    for (const auto& r : trace.records) {
        train.push_back(r.train_loss);
        if (r.validation_loss)
            validation.push_back(*r.validation_loss);
        else
            has_validation = false;
    }

    double lo = *std::min_element(train.begin(), train.end());
    double hi = *std::max_element(train.begin(), train.end());
    if (has_validation && !validation.empty()) {
        lo = std::min(lo, *std::min_element(validation.begin(), validation.end()));
        hi = std::max(hi, *std::max_element(validation.begin(), validation.end()));
    }
    if (hi <= lo) hi = lo + 1.0;

    const int n_points = static_cast<int>(train.size());
    auto px = [&](int t) {
        return kMargin + static_cast<int>(std::lround(static_cast<double>(t) /
                                                      std::max(1, n_points - 1) * (kWidth - 2 * kMargin)));
    };
    auto py = [&](double v) {
        return kHeight - kMargin -
               static_cast<int>(std::lround((v - lo) / (hi - lo) * (kHeight - 2 * kMargin)));
    };

    detail::Canvas canvas(kWidth, kHeight);
    const detail::Rgb black{0, 0, 0}, blue{50, 90, 180}, red{180, 60, 50};
    canvas.line(kMargin, kMargin, kMargin, kHeight - kMargin, black);
    canvas.line(kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, black);
    for (int t = 1; t < n_points; ++t)
        canvas.line(px(t - 1), py(train[static_cast<std::size_t>(t - 1)]), px(t),
                    py(train[static_cast<std::size_t>(t)]), blue);
    if (has_validation)
        for (std::size_t t = 1; t < validation.size(); ++t)
            canvas.line(px(static_cast<int>(t)), py(validation[t - 1]), px(static_cast<int>(t + 1)),
                        py(validation[t]), red);
    canvas.write_png(path);
}

}  // namespace ordboost
