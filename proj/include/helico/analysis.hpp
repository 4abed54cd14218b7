#pragma once

#include <optional>
#include <string>
#include <vector>

#include "helico/helicoid.hpp"

namespace helico {

// Local data of the profile at an isolated singular point t0, read in the
// axis-adapted frame (x is the distance coordinate from the rotation axis).
struct SingularPointProfile {
    double t0 = 0.0;
    int m = 1; // order of beta at t0
    bool is_front = true;
    double x0 = 0.0;
    double cos_phi0 = 0.0;
    // Order of phi - phi(t0); nullopt when ell vanishes to every checked order.
    std::optional<int> phi_order;
    bool degenerate = false; // m > 1
    double slant = 0.0;
};

SingularPointProfile profile_at_singularity(const HelicoidalSurface& H, double t0);

enum class Verdict { Bounded, Unbounded, Inconclusive };

const char* to_string(Verdict v);

struct Classification {
    Verdict verdict;
    std::string rule;
};

Classification classify_K(const SingularPointProfile& p);
Classification classify_H(const SingularPointProfile& p);

enum class Quantity { K, H };

struct ProbeSample {
    double h;
    double left;  // |value| at t0 - h
    double right; // |value| at t0 + h
};

struct ProbeResult {
    Verdict verdict = Verdict::Inconclusive;
    double slope = 0.0;
    std::vector<ProbeSample> samples;
};

ProbeResult boundedness_probe(const HelicoidalSurface& H, double t0, Quantity which);

} // namespace helico
