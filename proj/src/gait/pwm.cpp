#include "humanoid/gait/pwm.hpp"

#include <string>

#include "humanoid/error.hpp"

namespace humanoid::gait {

double angle_to_pulse(double angle, const ServoSpec& spec) {
  if (!(angle >= 0.0 && angle <= spec.angle_range)) {
    throw Error(Errc::AngleOutOfRange, spec.id + ": " + std::to_string(angle) + "° outside [0, " +
                                           std::to_string(spec.angle_range) + "]");
  }
  return spec.min_pulse + (angle / spec.angle_range) * (spec.max_pulse - spec.min_pulse);
}

double pulse_to_angle(double pulse, const ServoSpec& spec) {
  if (!(pulse >= spec.min_pulse && pulse <= spec.max_pulse)) {
    throw Error(Errc::PulseOutOfRange, spec.id + ": " + std::to_string(pulse) + " µs outside [" +
                                           std::to_string(spec.min_pulse) + ", " +
                                           std::to_string(spec.max_pulse) + "]");
  }
  return (pulse - spec.min_pulse) / (spec.max_pulse - spec.min_pulse) * spec.angle_range;
}

double pulse_to_duty(double pulse_us, double frequency_hz) {
  const double period_us = 1e6 / frequency_hz;
  if (!(pulse_us >= 0.0 && pulse_us <= period_us)) {
    throw Error(Errc::PulseExceedsPeriod, std::to_string(pulse_us) + " µs does not fit a " +
                                              std::to_string(period_us) + " µs period");
  }
  return pulse_us / period_us;
}

}  // namespace humanoid::gait
