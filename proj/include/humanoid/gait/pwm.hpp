#pragma once

#include "humanoid/gait/body.hpp"

namespace humanoid::gait {

/// Linear map [0, angle_range] → [min_pulse, max_pulse] in µs.
/// Throws AngleOutOfRange outside the servo's travel.
double angle_to_pulse(double angle, const ServoSpec& spec);

/// Inverse of angle_to_pulse. Throws PulseOutOfRange outside [min_pulse, max_pulse].
double pulse_to_angle(double pulse, const ServoSpec& spec);

/// Fraction of one PWM period the line is high. Throws PulseExceedsPeriod.
double pulse_to_duty(double pulse_us, double frequency_hz);

}  // namespace humanoid::gait
