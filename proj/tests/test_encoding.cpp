#include <doctest.h>

#include "testutil.hpp"

#include <cmath>
#include <cstdint>

#include "ordreg/encoding.hpp"

using namespace ordreg;

namespace {

const Encoding kOneHot{EncodingKind::OneHot};
const Encoding kGaussian{EncodingKind::Gaussian, 1.0};
const Encoding kContinuous{EncodingKind::Continuous};
const Encoding kProgressBar{EncodingKind::ProgressBar};
const Encoding kSoftProgressBar{EncodingKind::SoftProgressBar};
const Encoding kBinary{EncodingKind::BinaryNumber};

const Encoding kAllEncodings[] = {kOneHot,      kGaussian,        kContinuous,
                                  kProgressBar, kSoftProgressBar, kBinary};

} // namespace

TEST_CASE("vector lengths per encoding") {
    CHECK(vector_length(kOneHot, 5) == 5);
    CHECK(vector_length(kGaussian, 5) == 5);
    CHECK(vector_length(kContinuous, 5) == 1);
    CHECK(vector_length(kProgressBar, 5) == 4);
    CHECK(vector_length(kSoftProgressBar, 5) == 5);
    CHECK(vector_length(kBinary, 5) == 3);

    // binary width grows with the largest class index
    CHECK(vector_length(kBinary, 2) == 2);
    CHECK(vector_length(kBinary, 4) == 3);
    CHECK(vector_length(kBinary, 7) == 3);
    CHECK(vector_length(kBinary, 8) == 4);

    CHECK_THROWS_AS(vector_length(kOneHot, 1), InvalidScaleError);
    CHECK_THROWS_AS(vector_length(Encoding{EncodingKind::Gaussian, 0.0}, 5), ConfigError);
}

TEST_CASE("one-hot targets") {
    const OrdinalScale scale(5);
    CHECK(encode(kOneHot, scale, 2) == std::vector<double>{0, 1, 0, 0, 0});
    CHECK_THROWS_AS(encode(kOneHot, scale, 0), InvalidClassError);
    CHECK_THROWS_AS(encode(kOneHot, scale, 6), InvalidClassError);
}

TEST_CASE("gaussian targets are raw density values") {
    const OrdinalScale scale(5);
    const auto target = encode(kGaussian, scale, 2);
    const std::vector<double> printed = {0.242, 0.399, 0.242, 0.054, 0.004};
    REQUIRE(target.size() == printed.size());
    for (std::size_t i = 0; i < printed.size(); ++i) {
        CHECK(within(target[i], printed[i], 5e-4));
    }
    // no renormalization: the entries do not sum to 1
    double sum = 0;
    for (double v : target) {
        sum += v;
    }
    CHECK(sum < 1.0);
}

TEST_CASE("continuous targets sit on an equidistant grid") {
    const OrdinalScale scale(5);
    CHECK(encode(kContinuous, scale, 1) == std::vector<double>{0.0});
    CHECK(encode(kContinuous, scale, 5) == std::vector<double>{1.0});

    const OrdinalScale three(3);
    const TargetMatrix matrix(kContinuous, three);
    CHECK(matrix.row(1)[0] == 0.0);
    CHECK(matrix.row(2)[0] == 0.5);
    CHECK(matrix.row(3)[0] == 1.0);
}

TEST_CASE("progress-bar and soft-progress-bar targets") {
    const OrdinalScale scale(5);
    CHECK(encode(kProgressBar, scale, 3) == std::vector<double>{1, 1, 0, 0});
    CHECK(encode(kSoftProgressBar, scale, 3) == std::vector<double>{1, 1, 0.5, 0, 0});

    const OrdinalScale two(2);
    const TargetMatrix matrix(kProgressBar, two);
    CHECK(matrix.row_length() == 1);
    CHECK(matrix.row(1)[0] == 0.0);
    CHECK(matrix.row(2)[0] == 1.0);
}

TEST_CASE("binary targets write the class msb-first") {
    const OrdinalScale scale(5);
    CHECK(encode(kBinary, scale, 3) == std::vector<double>{0, 1, 1});
    CHECK(encode(kBinary, scale, 5) == std::vector<double>{1, 0, 1});

    // reading the bits back gives the class, for every scale size
    for (int class_count = 2; class_count <= 10; ++class_count) {
        const OrdinalScale s(class_count);
        for (int k = 1; k <= class_count; ++k) {
            const auto bits = encode(kBinary, s, k);
            int decoded = 0;
            for (double bit : bits) {
                decoded = decoded * 2 + static_cast<int>(bit);
            }
            CHECK(decoded == k);
        }
    }
}

TEST_CASE("one-hot matrix for two classes") {
    const OrdinalScale scale(2);
    const TargetMatrix matrix(kOneHot, scale);
    CHECK(std::vector<double>(matrix.row(1).begin(), matrix.row(1).end()) ==
          std::vector<double>{1, 0});
    CHECK(std::vector<double>(matrix.row(2).begin(), matrix.row(2).end()) ==
          std::vector<double>{0, 1});
}

TEST_CASE("target rows are pairwise distinct for every encoding and scale") {
    for (const Encoding& encoding : kAllEncodings) {
        for (int class_count = 2; class_count <= 10; ++class_count) {
            const OrdinalScale scale(class_count);
            const TargetMatrix matrix(encoding, scale);
            CHECK(matrix.row_length() == vector_length(encoding, class_count));
            for (int a = 1; a <= class_count; ++a) {
                for (int b = a + 1; b <= class_count; ++b) {
                    const auto ra = matrix.row(a);
                    const auto rb = matrix.row(b);
                    bool equal = true;
                    for (std::size_t i = 0; i < ra.size(); ++i) {
                        if (ra[i] != rb[i]) {
                            equal = false;
                            break;
                        }
                    }
                    CHECK_FALSE(equal);
                }
            }
        }
    }
}

TEST_CASE("gaussian peaks at its class and decays with distance") {
    for (int class_count = 2; class_count <= 10; ++class_count) {
        const OrdinalScale scale(class_count);
        for (int k = 1; k <= class_count; ++k) {
            const auto target = encode(kGaussian, scale, k);
            for (int i = 1; i <= class_count; ++i) {
                if (i != k) {
                    CHECK(target[static_cast<std::size_t>(i - 1)] <
                          target[static_cast<std::size_t>(k - 1)]);
                }
            }
            for (int i = k + 1; i <= class_count; ++i) {
                CHECK(target[static_cast<std::size_t>(i - 1)] <
                      target[static_cast<std::size_t>(i - 2)]);
            }
            for (int i = k - 1; i >= 1; --i) {
                CHECK(target[static_cast<std::size_t>(i - 1)] <
                      target[static_cast<std::size_t>(i)]);
            }
        }
    }
}

TEST_CASE("continuous is strictly increasing with equal gaps") {
    for (int class_count = 2; class_count <= 10; ++class_count) {
        const OrdinalScale scale(class_count);
        const double gap = 1.0 / (class_count - 1);
        double previous = -1.0;
        for (int k = 1; k <= class_count; ++k) {
            const double value = encode(kContinuous, scale, k)[0];
            CHECK(value > previous);
            if (k > 1) {
                CHECK(within(value - previous, gap, 1e-12));
            }
            previous = value;
        }
    }
}

TEST_CASE("bar encodings are non-increasing rows, dominated by the next class") {
    for (const Encoding& encoding : {kProgressBar, kSoftProgressBar}) {
        for (int class_count = 2; class_count <= 10; ++class_count) {
            const OrdinalScale scale(class_count);
            const TargetMatrix matrix(encoding, scale);
            for (int k = 1; k <= class_count; ++k) {
                const auto row = matrix.row(k);
                for (std::size_t i = 1; i < row.size(); ++i) {
                    CHECK(row[i] <= row[i - 1]);
                }
                if (k < class_count) {
                    const auto next = matrix.row(k + 1);
                    for (std::size_t i = 0; i < row.size(); ++i) {
                        CHECK(next[i] >= row[i]);
                    }
                }
            }
        }
    }
}

TEST_CASE("gaussian width leaves the peak and ordering intact") {
    const OrdinalScale scale(5);
    for (double sigma_squared : {0.25, 1.0, 4.0}) {
        const Encoding encoding{EncodingKind::Gaussian, sigma_squared};
        const TargetMatrix matrix(encoding, scale);
        for (int k = 1; k <= 5; ++k) {
            const auto row = matrix.row(k);
            for (int i = 1; i <= 5; ++i) {
                if (i != k) {
                    CHECK(row[static_cast<std::size_t>(i - 1)] <
                          row[static_cast<std::size_t>(k - 1)]);
                }
            }
        }
        // wider kernels put more weight off the peak
        if (sigma_squared > 0.25) {
            const auto narrow =
                encode({EncodingKind::Gaussian, 0.25}, scale, 3);
            const auto wide = encode(encoding, scale, 3);
            CHECK(wide[0] > narrow[0]);
        }
    }
}

TEST_CASE("encode is pure") {
    const OrdinalScale scale(7);
    for (const Encoding& encoding : kAllEncodings) {
        for (int k = 1; k <= 7; ++k) {
            CHECK(encode(encoding, scale, k) == encode(encoding, scale, k));
        }
    }
}

TEST_CASE("scale labels") {
    const OrdinalScale severity(5);
    CHECK(severity.labels() == std::vector<std::string>{"None", "(+)", "+", "++", "+++"});
    CHECK(severity.label(2) == "(+)");

    const OrdinalScale numeric(3);
    CHECK(numeric.labels() == std::vector<std::string>{"1", "2", "3"});

    CHECK_THROWS_AS(OrdinalScale(1), InvalidScaleError);
    CHECK_THROWS_AS(OrdinalScale(3, {"a", "b"}), InvalidScaleError);
    CHECK_THROWS_AS(severity.label(0), InvalidClassError);
}

TEST_CASE("encoding names round-trip") {
    for (const Encoding& encoding : kAllEncodings) {
        CHECK(parse_encoding_kind(encoding_name(encoding.kind)) == encoding.kind);
        CHECK(parse_encoding_display_name(encoding_display_name(encoding.kind)) ==
              encoding.kind);
    }
    CHECK_THROWS_AS(parse_encoding_kind("onehot"), ConfigError);
}
