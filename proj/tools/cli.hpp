#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helico/helicoid.hpp"

namespace helico::cli {

struct Scene {
    LegendreCurve curve;
    Axis axis = Axis::Z;
    double slant = 0.0;
    int samples = 201;
    double theta_min = 0.0;
    double theta_max = 6.283185307179586;
    int theta_count = 64;

    HelicoidalSurface surface() const;
};

Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& json_text);

// Runs the command line; output goes to `out` unless a subcommand writes a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace helico::cli
