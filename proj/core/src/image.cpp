#include "semaug/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <fstream>

#include "semaug/common.hpp"

namespace semaug {

static Image from_bgr_mat(const cv::Mat& bgr) {
    Image img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            img.at(x, y, 0) = row[x][2];
            img.at(x, y, 1) = row[x][1];
            img.at(x, y, 2) = row[x][0];
        }
    }
    return img;
}

static cv::Mat to_bgr_mat(const Image& image) {
    cv::Mat bgr(image.height, image.width, CV_8UC3);
    for (int y = 0; y < image.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width; ++x) {
            row[x][0] = image.at(x, y, 2);
            row[x][1] = image.at(x, y, 1);
            row[x][2] = image.at(x, y, 0);
        }
    }
    return bgr;
}

Image decode_image(const std::vector<std::uint8_t>& bytes) {
    cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (bgr.empty()) {
        throw Error(ErrorCode::UnreadableImage, "decode failed");
    }
    return from_bgr_mat(bgr);
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.empty()) {
        throw Error(ErrorCode::UnreadableImage, "empty file " + path.string());
    }
    try {
        return decode_image(bytes);
    } catch (const Error&) {
        throw Error(ErrorCode::UnreadableImage, "decode failed for " + path.string());
    }
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    if (image.empty()) {
        throw Error(ErrorCode::DegenerateImage, "cannot encode empty image");
    }
    std::vector<std::uint8_t> out;
    std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 3};
    if (!cv::imencode(".png", to_bgr_mat(image), out, params)) {
        throw Error(ErrorCode::IoError, "png encode failed");
    }
    return out;
}

void save_png(const Image& image, const std::filesystem::path& path) {
    auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to " + path.string());
    }
}

double mean_abs_diff(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height) {
        throw Error(ErrorCode::DimensionMismatch, "image sizes differ");
    }
    if (a.pixels.empty()) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        sum += std::abs(static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i]));
    }
    return sum / static_cast<double>(a.pixels.size());
}

double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return (299.0 * r + 587.0 * g + 114.0 * b) / 1000.0;
}

}  // namespace semaug
