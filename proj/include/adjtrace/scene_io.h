#pragma once

#include "adjtrace/scene.h"

#include <stdexcept>
#include <string>
#include <string_view>

namespace adjtrace {

/// Scene-file error carrying the 1-based line it refers to.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

/// Parses the line-oriented scene format:
///
///   camera eye x y z look x y z up x y z fov f res w h
///   material <name> emitter emission <v|@k> base <e> absorb 1.0
///   material <name> phong ambient <v|@k> diffuse <v|@k> specular <v|@k> exponent <v|@k> absorb <a>
///   material <name> lambert ambient <v|@k> diffuse <v|@k> absorb <a>
///   quad p x y z u x y z v x y z mat <name>
///   sphere c x y z r <r> mat <name>
///   theta v1 ... v7
///
/// `@k` binds a parameter to control k (1..7); each control may be bound once.
/// `#` starts a comment. Materials must be declared before use.
Scene parse_scene(std::string_view text);

std::string serialize_scene(const Scene &scene);

/// Cornell-style box: six Lambert walls, a ceiling quad light and a Phong-Blinn
/// sphere at the center, viewed by a pinhole camera inside the box looking down +z.
Scene build_cornell_box();

/// Default controls of the built-in box.
ControlVector cornell_default_theta();

}  // namespace adjtrace
