#include "qwdirac.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <string>

#include "qwdirac/config.hpp"
#include "qwdirac/experiments.hpp"
#include "qwdirac/walk.hpp"

using namespace qwd;

extern "C" {

struct qwd_config {
    KeyValues raw;
};

struct qwd_walk {
    Lattice lat;
    SpinorField state;
    AngleField angles;
    int row = 0;
};

} // extern "C"

namespace {

thread_local std::string g_error;

void clear_error() { g_error.clear(); }

int set_error(const std::exception& e) {
    g_error = e.what();
    return dynamic_cast<const ConfigError*>(&e) ? QWD_E_CONFIG : QWD_E_RUN;
}

int set_error(const char* msg, int code) {
    g_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

} // namespace

extern "C" {

const char* qwd_version(void) { return core_version(); }

const char* qwd_last_error(void) { return g_error.c_str(); }

void qwd_free(void* p) { std::free(p); }

qwd_config* qwd_config_load(const char* path) {
    clear_error();
    if (!path) {
        set_error("qwd_config_load: path is NULL", QWD_E_CONFIG);
        return nullptr;
    }
    try {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError(std::string("config: cannot open ") + path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        KeyValues raw = parse_key_values(text);
        make_config(raw); // validate now so a returned handle is always runnable
        return new qwd_config{std::move(raw)};
    } catch (const std::exception& e) {
        set_error(e);
        return nullptr;
    }
}

qwd_config* qwd_config_parse(const char* text) {
    clear_error();
    if (!text) {
        set_error("qwd_config_parse: text is NULL", QWD_E_CONFIG);
        return nullptr;
    }
    try {
        KeyValues raw = parse_key_values(text);
        make_config(raw);
        return new qwd_config{std::move(raw)};
    } catch (const std::exception& e) {
        set_error(e);
        return nullptr;
    }
}

void qwd_config_free(qwd_config* cfg) { delete cfg; }

int qwd_config_set(qwd_config* cfg, const char* key, const char* value) {
    clear_error();
    if (!cfg || !key || !value)
        return set_error("qwd_config_set: NULL argument", QWD_E_CONFIG);
    try {
        KeyValues next = cfg->raw;
        set_key(next, key, value);
        make_config(next);
        cfg->raw = std::move(next);
        return QWD_OK;
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

char* qwd_config_get(const qwd_config* cfg, const char* key) {
    clear_error();
    if (!cfg || !key) {
        set_error("qwd_config_get: NULL argument", QWD_E_CONFIG);
        return nullptr;
    }
    try {
        const KeyValues echo = config_key_values(make_config(cfg->raw));
        for (const auto& [k, v] : echo)
            if (k == key) return dup_string(v);
        set_error(("qwd_config_get: key '" + std::string(key) +
                   "' is not part of this configuration")
                      .c_str(),
                  QWD_E_CONFIG);
        return nullptr;
    } catch (const std::exception& e) {
        set_error(e);
        return nullptr;
    }
}

int qwd_run(const qwd_config* cfg, char** report) {
    clear_error();
    if (report) *report = nullptr;
    if (!cfg) return set_error("qwd_run: cfg is NULL", QWD_E_CONFIG);
    try {
        const std::string text = run_experiment(make_config(cfg->raw));
        if (report) *report = dup_string(text);
        return QWD_OK;
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

int qwd_check(uint64_t seed, char** report) {
    clear_error();
    if (report) *report = nullptr;
    try {
        const PropertyReport pr = run_property_suite(seed);
        if (report) *report = dup_string(pr.text);
        if (!pr.all_pass) return set_error("invariant checks failed", QWD_E_RUN);
        return QWD_OK;
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

qwd_walk* qwd_walk_create(int n_sites, double length) {
    clear_error();
    try {
        const Lattice lat(n_sites, length);
        auto* w = new qwd_walk{lat, SpinorField(lat), uniform_angles(0, 0, 0, 0), 0};
        return w;
    } catch (const std::exception& e) {
        set_error(e);
        return nullptr;
    }
}

void qwd_walk_free(qwd_walk* w) { delete w; }

int qwd_walk_size(const qwd_walk* w) { return w ? w->lat.n : 0; }

int qwd_walk_set_uniform_angles(qwd_walk* w, double theta, double xi, double zeta,
                                double alpha) {
    clear_error();
    if (!w) return set_error("qwd_walk_set_uniform_angles: walk is NULL", QWD_E_CONFIG);
    w->angles = uniform_angles(theta, xi, zeta, alpha);
    return QWD_OK;
}

int qwd_walk_set_state(qwd_walk* w, const double* interleaved, size_t len) {
    clear_error();
    if (!w || !interleaved)
        return set_error("qwd_walk_set_state: NULL argument", QWD_E_CONFIG);
    if (len != static_cast<size_t>(w->lat.n) * 4)
        return set_error("qwd_walk_set_state: len must be 4 * n_sites", QWD_E_CONFIG);
    for (int m = 0; m < w->lat.n; ++m) {
        w->state.L[m] = cplx(interleaved[4 * m], interleaved[4 * m + 1]);
        w->state.R[m] = cplx(interleaved[4 * m + 2], interleaved[4 * m + 3]);
    }
    return QWD_OK;
}

int qwd_walk_get_state(const qwd_walk* w, double* interleaved, size_t len) {
    clear_error();
    if (!w || !interleaved)
        return set_error("qwd_walk_get_state: NULL argument", QWD_E_CONFIG);
    if (len != static_cast<size_t>(w->lat.n) * 4)
        return set_error("qwd_walk_get_state: len must be 4 * n_sites", QWD_E_CONFIG);
    for (int m = 0; m < w->lat.n; ++m) {
        interleaved[4 * m] = w->state.L[m].real();
        interleaved[4 * m + 1] = w->state.L[m].imag();
        interleaved[4 * m + 2] = w->state.R[m].real();
        interleaved[4 * m + 3] = w->state.R[m].imag();
    }
    return QWD_OK;
}

int qwd_walk_step(qwd_walk* w, int n_steps) {
    clear_error();
    if (!w) return set_error("qwd_walk_step: walk is NULL", QWD_E_CONFIG);
    if (n_steps < 0) return set_error("qwd_walk_step: n_steps must be >= 0", QWD_E_CONFIG);
    try {
        evolve_s1(w->state, w->angles, w->row, n_steps);
        w->row += n_steps;
        return QWD_OK;
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

double qwd_walk_norm(const qwd_walk* w) { return w ? w->state.norm_sq() : 0.0; }

} // extern "C"
