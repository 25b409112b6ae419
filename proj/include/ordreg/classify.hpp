#pragma once

#include <span>
#include <string>

#include "ordreg/encoding.hpp"

namespace ordreg {

// Decoders from a model output vector back to a class index.
enum class ClassifierKind {
    Argmax,     // index of the largest entry
    L1Nearest,  // target with the smallest elementwise absolute difference
    DotNearest, // target with the largest cosine similarity
};

// Not every decoder makes sense for every target function:
//   Argmax needs the class index to coincide with the peak entry, so it is
//   limited to one-hot and Gaussian targets. DotNearest cannot normalize the
//   continuous scalar or the all-zero first progress-bar target. L1Nearest
//   works everywhere.
bool is_compatible(const Encoding& encoding, ClassifierKind classifier);

// Decode output y against the target matrix. Ties resolve to the smallest
// class index. Throws CompatibilityError for a pair ruled out above and
// DegenerateOutputError when DotNearest meets a zero-norm output.
int classify(ClassifierKind classifier, std::span<const double> output,
             const TargetMatrix& targets);

std::string classifier_name(ClassifierKind kind);          // argmax, l1, dot
ClassifierKind parse_classifier_kind(const std::string& name);

std::string classifier_display_name(ClassifierKind kind);  // Argmax, L1, DP
ClassifierKind parse_classifier_display_name(const std::string& name);

} // namespace ordreg
