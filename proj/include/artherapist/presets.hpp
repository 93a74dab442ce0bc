#pragma once

// Built-in catalog used by the batch simulator: one three-level game and a
// program that walks through it.

#include <string>
#include <vector>

#include "artherapist/domain.hpp"

namespace artherapist {

inline constexpr const char* kSimGameId = "sim-game";
inline constexpr const char* kSimProgramId = "sim-program";
inline constexpr const char* kSimDoctorId = "sim-doctor";

inline std::vector<ObjectSpec> preset_objects(int count) {
  static const ShapeKind kinds[] = {ShapeKind::cube, ShapeKind::sphere, ShapeKind::cone};
  std::vector<ObjectSpec> objects;
  for (int i = 0; i < count; ++i) {
    ObjectSpec o;
    o.object_id = "obj" + std::to_string(i + 1);
    o.shape.kind = kinds[i % 3];
    o.base_size = 0.1;
    // Side by side on a table top, 0.3 m lanes.
    const double x0 = -0.9 + 0.3 * i;
    o.placement_region = {{x0, 0.7, -0.6}, {x0 + 0.25, 0.9, -0.3}};
    objects.push_back(std::move(o));
  }
  return objects;
}

inline LevelDefinition preset_level(int number, int objects, int distractors, double try_time, int tries) {
  LevelDefinition l;
  l.level_number = number;
  l.objects = preset_objects(objects);
  l.distractors_per_try = distractors;
  l.try_time = try_time;
  l.tries_per_session = tries;
  l.max_time = 60.0;
  return l;
}

inline GameDefinition simulation_game() {
  GameDefinition g;
  g.game_id = kSimGameId;
  g.type = GameType::drag_and_drop;
  g.levels = {preset_level(1, 4, 2, 5.0, 10), preset_level(2, 5, 3, 4.0, 12), preset_level(3, 6, 4, 3.0, 15)};
  return g;
}

inline TreatmentProgram simulation_program() {
  TreatmentProgram p;
  p.program_id = kSimProgramId;
  p.session_specs = {{kSimGameId, 1}, {kSimGameId, 2}, {kSimGameId, 3}};
  p.duration_cap = 20.0;
  p.progression_policy = {0.7, 0.3, 2};
  return p;
}

}  // namespace artherapist
