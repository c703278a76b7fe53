#include "schedwin/showup.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace schedwin {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string format_label(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c);
    return buf;
}

}  // namespace

double showup_kopach(double noshow_base_p, double delay_days, double amp, double decay) {
    require(noshow_base_p >= 0.0 && noshow_base_p <= 1.0,
            "showup: noshow_base_p must lie in [0, 1]");
    require(delay_days >= 0.0, "showup: delay must be >= 0");
    require(amp >= 0.0 && amp <= 1.0, "showup: decay_amplitude must lie in [0, 1]");
    return 1.0 - noshow_base_p * (1.0 - amp * std::exp(-decay * delay_days));
}

double showup_pure_exponential(double delay_days, double amp, double decay) {
    require(delay_days >= 0.0, "showup: delay must be >= 0");
    require(amp >= 0.0 && amp <= 1.0, "showup: decay_amplitude must lie in [0, 1]");
    return amp * std::exp(-decay * delay_days);
}

double showup_saturating(double q_min, double q_max, double decay, double delay_days) {
    require(q_min >= 0.0 && q_min <= q_max && q_max <= 1.0,
            "showup: need 0 <= q_min <= q_max <= 1");
    require(delay_days >= 0.0, "showup: delay must be >= 0");
    return q_min + (q_max - q_min) * std::exp(-decay * delay_days);
}

double AffineExp::at(double d) const {
    return offset + scale * std::exp(-rate * d);
}

void ShowupModel::validate() const {
    require(decay_coeff >= 0.0, "showup: decay_coeff must be >= 0");
    require(position_offset >= 0, "showup: position_offset must be >= 0");
    switch (family) {
        case ShowupFamily::Kopach:
            require(noshow_base_p >= 0.0 && noshow_base_p <= 1.0,
                    "showup: noshow_base_p must lie in [0, 1]");
            require(decay_amplitude >= 0.0 && decay_amplitude <= 1.0,
                    "showup: decay_amplitude must lie in [0, 1]");
            break;
        case ShowupFamily::PureExponential:
            require(decay_amplitude >= 0.0 && decay_amplitude <= 1.0,
                    "showup: decay_amplitude must lie in [0, 1]");
            break;
        case ShowupFamily::SaturatingExponential:
            require(q_min >= 0.0 && q_min <= q_max && q_max <= 1.0,
                    "showup: need 0 <= q_min <= q_max <= 1");
            break;
    }
}

AffineExp ShowupModel::affine_exp() const {
    switch (family) {
        case ShowupFamily::Kopach:
            return {1.0 - noshow_base_p, noshow_base_p * decay_amplitude, decay_coeff};
        case ShowupFamily::PureExponential:
            return {0.0, decay_amplitude, decay_coeff};
        case ShowupFamily::SaturatingExponential:
            return {q_min, q_max - q_min, decay_coeff};
    }
    throw std::logic_error("showup: unknown family");
}

double ShowupModel::at_delay(double delay_days) const {
    return affine_exp().at(delay_days);
}

double ShowupModel::delay_for_position(std::int64_t j, double mu) const {
    require(j >= 0, "showup: queue position must be >= 0");
    require(mu > 0.0, "showup: mu must be > 0");
    const double slots = static_cast<double>(j + position_offset);
    switch (delay_map) {
        case DelayMap::SlotsAsDays: return slots;
        case DelayMap::SlotsOverMu: return slots / mu;
    }
    throw std::logic_error("showup: unknown delay map");
}

double ShowupModel::at_position(std::int64_t j, double mu) const {
    return at_delay(delay_for_position(j, mu));
}

double ShowupModel::asymptote() const {
    const AffineExp f = affine_exp();
    return f.rate > 0.0 ? f.offset : f.offset + f.scale;
}

ShowupModel kopach_model(double noshow_base_p, DelayMap map) {
    ShowupModel m;
    m.family = ShowupFamily::Kopach;
    m.noshow_base_p = noshow_base_p;
    m.delay_map = map;
    m.label = format_label("kopach(p=%g)", noshow_base_p);
    m.validate();
    return m;
}

ShowupModel pure_exponential_model(DelayMap map) {
    ShowupModel m;
    m.family = ShowupFamily::PureExponential;
    m.delay_map = map;
    m.label = "pure_exponential";
    m.validate();
    return m;
}

ShowupModel saturating_model(double q_min, double q_max, double decay, DelayMap map) {
    ShowupModel m;
    m.family = ShowupFamily::SaturatingExponential;
    m.q_min = q_min;
    m.q_max = q_max;
    m.decay_coeff = decay;
    m.delay_map = map;
    m.label = format_label("saturating(%g..%g, c=%g)", q_min, q_max, decay);
    m.validate();
    return m;
}

double showup_at_position(const ShowupModel& model, std::int64_t j, double mu) {
    return model.at_position(j, mu);
}

}  // namespace schedwin
