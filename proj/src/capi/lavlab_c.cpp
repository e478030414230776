#include "lavlab/lavlab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "lavlab/errors.hpp"
#include "lavlab/exact.hpp"
#include "lavlab/functional.hpp"
#include "lavlab/gapscan.hpp"
#include "lavlab/io.hpp"
#include "lavlab/lagrangian.hpp"
#include "lavlab/necessary.hpp"
#include "lavlab/repar.hpp"
#include "lavlab/runner.hpp"

struct lavlab_lagrangian {
    lavlab::Lagrangian value;
};
struct lavlab_trajectory {
    lavlab::Trajectory value;
};
struct lavlab_repar_result {
    lavlab::ReparResult value;
};
struct lavlab_run_output {
    lavlab::RunOutput value;
};

namespace {

thread_local std::string last_error;

lavlab_status status_of(lavlab::ErrorKind kind) {
    using lavlab::ErrorKind;
    switch (kind) {
        case ErrorKind::argument: return LAVLAB_ERR_ARGUMENT;
        case ErrorKind::domain: return LAVLAB_ERR_DOMAIN;
        case ErrorKind::lookup: return LAVLAB_ERR_LOOKUP;
        case ErrorKind::singular_point: return LAVLAB_ERR_SINGULAR;
        case ErrorKind::contract: return LAVLAB_ERR_CONTRACT;
        case ErrorKind::infeasible: return LAVLAB_ERR_INFEASIBLE;
        case ErrorKind::unsupported: return LAVLAB_ERR_UNSUPPORTED;
        case ErrorKind::parse: return LAVLAB_ERR_PARSE;
        case ErrorKind::io: return LAVLAB_ERR_IO;
        case ErrorKind::internal: return LAVLAB_ERR_INTERNAL;
    }
    return LAVLAB_ERR_INTERNAL;
}

lavlab_status fail(lavlab_status status, const char* message) {
    last_error = message;
    return status;
}

// Runs body(), translating every exception into a status code.
template <class Body>
lavlab_status guarded(Body body) {
    try {
        body();
        last_error.clear();
        return LAVLAB_OK;
    } catch (const lavlab::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LAVLAB_ERR_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(LAVLAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(LAVLAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(LAVLAB_ERR_INTERNAL, "unknown failure");
    }
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw lavlab::Error(lavlab::ErrorKind::argument, std::string(what) + " must not be NULL");
}

nlohmann::json parse_json(const char* text) {
    require(text, "JSON text");
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw lavlab::Error(lavlab::ErrorKind::parse, e.what());
    }
}

double plain(lavlab::ExtendedReal x) {
    return x.is_finite() ? x.value() : std::numeric_limits<double>::infinity();
}

}  // namespace

extern "C" {

const char* lavlab_last_error_message(void) { return last_error.c_str(); }

const char* lavlab_status_name(lavlab_status status) {
    switch (status) {
        case LAVLAB_OK: return "ok";
        case LAVLAB_ERR_ARGUMENT: return "argument";
        case LAVLAB_ERR_DOMAIN: return "domain";
        case LAVLAB_ERR_LOOKUP: return "lookup";
        case LAVLAB_ERR_SINGULAR: return "singular_point";
        case LAVLAB_ERR_CONTRACT: return "contract";
        case LAVLAB_ERR_INFEASIBLE: return "infeasible";
        case LAVLAB_ERR_UNSUPPORTED: return "unsupported";
        case LAVLAB_ERR_PARSE: return "parse";
        case LAVLAB_ERR_IO: return "io";
        case LAVLAB_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* lavlab_version(void) { return "0.1.0"; }

void lavlab_string_free(char* s) { std::free(s); }

size_t lavlab_catalog_size(void) { return lavlab::catalog_ids().size(); }

const char* lavlab_catalog_id(size_t index) {
    const auto ids = lavlab::catalog_ids();
    return index < ids.size() ? ids[index].data() : nullptr;
}

lavlab_status lavlab_lagrangian_from_catalog(const char* id, lavlab_lagrangian** out) {
    return guarded([&] {
        require(id, "id");
        require(out, "out");
        *out = new lavlab_lagrangian{lavlab::catalog(id)};
    });
}

lavlab_status lavlab_lagrangian_from_json(const char* json, lavlab_lagrangian** out) {
    return guarded([&] {
        require(out, "out");
        *out = new lavlab_lagrangian{lavlab::lagrangian_from_json(parse_json(json))};
    });
}

void lavlab_lagrangian_free(lavlab_lagrangian* l) { delete l; }

const char* lavlab_lagrangian_id(const lavlab_lagrangian* l) { return l ? l->value.id().c_str() : nullptr; }

lavlab_status lavlab_lagrangian_eval(const lavlab_lagrangian* l, double t, double y, double v, double* out) {
    return guarded([&] {
        require(l, "lagrangian");
        require(out, "out");
        const double value = l->value(t, y, v);
        *out = value > lavlab::infinity_threshold ? std::numeric_limits<double>::infinity() : value;
    });
}

lavlab_status lavlab_lagrangian_partials(const lavlab_lagrangian* l, double t, double y, double v, double out[3]) {
    return guarded([&] {
        require(l, "lagrangian");
        require(out, "out");
        const auto p = l->value.partials(t, y, v);
        out[0] = p.t;
        out[1] = p.y;
        out[2] = p.v;
    });
}

lavlab_status lavlab_lagrangian_flags(const lavlab_lagrangian* l, int* autonomous, int* convex_in_v, int* extended) {
    return guarded([&] {
        require(l, "lagrangian");
        if (autonomous) *autonomous = l->value.autonomous();
        if (convex_in_v) *convex_in_v = l->value.convex_in_v();
        if (extended) *extended = l->value.extended();
    });
}

lavlab_status lavlab_trajectory_create(const double* nodes, const double* values, size_t count,
                                       lavlab_trajectory** out) {
    return guarded([&] {
        require(nodes, "nodes");
        require(values, "values");
        require(out, "out");
        *out = new lavlab_trajectory{lavlab::Trajectory(lavlab::Mesh(std::vector<double>(nodes, nodes + count)),
                                                        std::vector<double>(values, values + count))};
    });
}

lavlab_status lavlab_trajectory_sample_exact(const char* name, const char* params_json, double a, double b, size_t n,
                                             double power, lavlab_trajectory** out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        lavlab::ExactParams params;
        if (params_json) {
            const auto j = parse_json(params_json);
            if (!j.is_object()) throw lavlab::Error(lavlab::ErrorKind::parse, "exact parameters must be an object");
            for (const auto& [k, v] : j.items()) params[k] = v.get<double>();
        }
        const auto f = lavlab::exact_function(name, params);
        *out = new lavlab_trajectory{lavlab::sample(f.value, lavlab::graded_mesh(a, b, n, power))};
    });
}

lavlab_status lavlab_trajectory_from_csv(const char* text, lavlab_trajectory** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new lavlab_trajectory{lavlab::trajectory_from_csv(text)};
    });
}

lavlab_status lavlab_trajectory_from_json(const char* text, lavlab_trajectory** out) {
    return guarded([&] {
        require(out, "out");
        *out = new lavlab_trajectory{lavlab::trajectory_from_json(parse_json(text))};
    });
}

lavlab_status lavlab_trajectory_to_csv(const lavlab_trajectory* y, char** out) {
    return guarded([&] {
        require(y, "trajectory");
        require(out, "out");
        *out = duplicate(lavlab::trajectory_to_csv(y->value));
    });
}

lavlab_status lavlab_trajectory_to_json(const lavlab_trajectory* y, char** out) {
    return guarded([&] {
        require(y, "trajectory");
        require(out, "out");
        *out = duplicate(lavlab::dump(lavlab::trajectory_to_json(y->value)));
    });
}

void lavlab_trajectory_free(lavlab_trajectory* y) { delete y; }

size_t lavlab_trajectory_node_count(const lavlab_trajectory* y) { return y ? y->value.mesh().node_count() : 0; }

size_t lavlab_trajectory_copy_nodes(const lavlab_trajectory* y, double* out, size_t capacity) {
    if (!y) return 0;
    const auto nodes = y->value.mesh().nodes();
    for (size_t i = 0; out && i < nodes.size() && i < capacity; ++i) out[i] = nodes[i];
    return nodes.size();
}

size_t lavlab_trajectory_copy_values(const lavlab_trajectory* y, double* out, size_t capacity) {
    if (!y) return 0;
    const auto values = y->value.values();
    for (size_t i = 0; out && i < values.size() && i < capacity; ++i) out[i] = values[i];
    return values.size();
}

lavlab_status lavlab_trajectory_eval(const lavlab_trajectory* y, double t, double* out) {
    return guarded([&] {
        require(y, "trajectory");
        require(out, "out");
        *out = y->value.eval(t);
    });
}

double lavlab_trajectory_lipschitz(const lavlab_trajectory* y) {
    return y ? y->value.lipschitz_constant() : std::numeric_limits<double>::quiet_NaN();
}

lavlab_status lavlab_energy(const lavlab_lagrangian* l, const lavlab_trajectory* y, int order, double* value,
                            char** report_json) {
    return guarded([&] {
        require(l, "lagrangian");
        require(y, "trajectory");
        const auto report = lavlab::energy(l->value, y->value, {.order = order, .estimate_error = report_json != nullptr});
        if (value) *value = plain(report.value);
        if (report_json) *report_json = duplicate(lavlab::dump(lavlab::to_json(report)));
    });
}

lavlab_status lavlab_reparametrize(const lavlab_lagrangian* l, const lavlab_trajectory* y, double k, int order,
                                   lavlab_repar_result** out, double* minimal_k) {
    try {
        require(l, "lagrangian");
        require(y, "trajectory");
        require(out, "out");
        *out = new lavlab_repar_result{lavlab::reparametrize(l->value, y->value, k, order)};
        last_error.clear();
        return LAVLAB_OK;
    } catch (const lavlab::InfeasibleError& e) {
        if (minimal_k) *minimal_k = e.minimal_k();
        return fail(LAVLAB_ERR_INFEASIBLE, e.what());
    } catch (...) {
        return guarded([] { throw; });
    }
}

void lavlab_repar_result_free(lavlab_repar_result* r) { delete r; }

lavlab_status lavlab_repar_result_summary(const lavlab_repar_result* r, lavlab_repar_summary* out) {
    return guarded([&] {
        require(r, "result");
        require(out, "out");
        const auto& v = r->value;
        *out = {v.plan.k,
                v.plan.lambda,
                v.lip_before,
                v.lip_after,
                plain(v.energy_before),
                plain(v.energy_after),
                v.plan.measure_fast,
                v.plan.measure_accel,
                v.plan.deficit};
    });
}

lavlab_status lavlab_repar_result_trajectory(const lavlab_repar_result* r, lavlab_trajectory** out) {
    return guarded([&] {
        require(r, "result");
        require(out, "out");
        *out = new lavlab_trajectory{r->value.reparametrized};
    });
}

lavlab_status lavlab_repar_result_json(const lavlab_repar_result* r, char** out) {
    return guarded([&] {
        require(r, "result");
        require(out, "out");
        *out = duplicate(lavlab::dump(lavlab::to_json(r->value)));
    });
}

lavlab_status lavlab_find_threshold_k(const lavlab_lagrangian* l, const lavlab_trajectory* y, const double* k_grid,
                                      size_t count, int order, unsigned threads, int* found, double* k_threshold,
                                      char** report_json) {
    return guarded([&] {
        require(l, "lagrangian");
        require(y, "trajectory");
        require(k_grid, "k_grid");
        const auto report = lavlab::find_threshold_k(l->value, y->value, {k_grid, count}, order, threads);
        if (found) *found = report.k_threshold.has_value();
        if (k_threshold && report.k_threshold) *k_threshold = *report.k_threshold;
        if (report_json) *report_json = duplicate(lavlab::dump(lavlab::to_json(report)));
    });
}

lavlab_status lavlab_el_residual(const lavlab_lagrangian* l, const lavlab_trajectory* y, double* max_abs,
                                 char** report_json) {
    return guarded([&] {
        require(l, "lagrangian");
        require(y, "trajectory");
        const auto report = lavlab::euler_lagrange_residual(l->value, y->value);
        if (max_abs) *max_abs = report.max_abs;
        if (report_json) *report_json = duplicate(lavlab::dump(lavlab::to_json(report)));
    });
}

lavlab_status lavlab_dbr_residual(const lavlab_lagrangian* l, const lavlab_trajectory* y, double* max_abs,
                                  double* constant, char** report_json) {
    return guarded([&] {
        require(l, "lagrangian");
        require(y, "trajectory");
        const auto report = lavlab::du_bois_reymond_residual(l->value, y->value);
        if (max_abs) *max_abs = report.max_abs;
        if (constant) *constant = report.constant.value_or(std::numeric_limits<double>::quiet_NaN());
        if (report_json) *report_json = duplicate(lavlab::dump(lavlab::to_json(report)));
    });
}

lavlab_status lavlab_halfinverse_lower_bound(const lavlab_trajectory* y, double c, double b, double lipschitz,
                                             double* out) {
    return guarded([&] {
        require(y, "trajectory");
        require(out, "out");
        *out = lavlab::halfinverse_lower_bound(y->value, c, b, lipschitz);
    });
}

lavlab_status lavlab_run(const char* config_json, lavlab_run_output** out) {
    return guarded([&] {
        require(out, "out");
        const auto config = lavlab::config_from_json(parse_json(config_json));
        *out = new lavlab_run_output{lavlab::run(config)};
    });
}

const char* lavlab_run_output_json(const lavlab_run_output* o) { return o ? o->value.json.c_str() : nullptr; }
const char* lavlab_run_output_csv(const lavlab_run_output* o) { return o ? o->value.csv.c_str() : nullptr; }
const char* lavlab_run_output_text(const lavlab_run_output* o) { return o ? o->value.text.c_str() : nullptr; }
void lavlab_run_output_free(lavlab_run_output* o) { delete o; }

lavlab_status lavlab_config_canonicalize(const char* config_json, char** out) {
    return guarded([&] {
        require(out, "out");
        const auto config = lavlab::config_from_json(parse_json(config_json));
        *out = duplicate(lavlab::dump(lavlab::config_to_json(config)));
    });
}

lavlab_status lavlab_config_validate(const char* config_json) {
    return guarded([&] { lavlab::validate(lavlab::config_from_json(parse_json(config_json))); });
}

}  // extern "C"
