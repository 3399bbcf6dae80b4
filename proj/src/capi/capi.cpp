#include "rpt.h"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "core/choi.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"
#include "core/io.hpp"

struct rpt_config {
    rpt::RunConfig cfg;
};

struct rpt_operator {
    rpt::DenseOperator op;
};

struct rpt_choi {
    rpt::ChoiMatrix choi;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <class F>
rpt_status guarded(F&& f) noexcept {
    try {
        f();
        return RPT_OK;
    } catch (const rpt::parse_error& e) {
        set_error(e.what());
        return RPT_DATA_ERROR;
    } catch (const rpt::validation_error& e) {
        set_error(e.what());
        return RPT_DATA_ERROR;
    } catch (const rpt::numeric_error& e) {
        set_error(e.what());
        return RPT_NUMERIC_ERROR;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return RPT_USAGE_ERROR;
    } catch (const std::exception& e) {
        set_error(e.what());
        return RPT_NUMERIC_ERROR;
    }
}

rpt_status usage_error(const char* what) {
    set_error(what);
    return RPT_USAGE_ERROR;
}

}  // namespace

extern "C" {

const char* rpt_version(void) { return "0.1.0"; }

const char* rpt_last_error(void) { return g_last_error.c_str(); }

rpt_config* rpt_config_new(void) {
    try {
        return new rpt_config();
    } catch (...) {
        return nullptr;
    }
}

void rpt_config_free(rpt_config* cfg) { delete cfg; }

rpt_status rpt_config_set(rpt_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return usage_error("null argument");
    return guarded([&] { cfg->cfg.set(key, value); });
}

rpt_status rpt_config_load(rpt_config* cfg, const char* path) {
    if (!cfg || !path) return usage_error("null argument");
    return guarded([&] {
        const rpt::RunConfig loaded = rpt::RunConfig::from_file(path);
        // Merge: file values overwrite existing keys.
        std::istringstream lines(loaded.serialize());
        std::string line;
        while (std::getline(lines, line)) {
            const size_t eq = line.find('=');
            cfg->cfg.set(line.substr(0, eq), line.substr(eq + 1));
        }
    });
}

rpt_status rpt_run(const rpt_config* cfg, const char* subcommand, const char* out_path) {
    if (!cfg || !subcommand) return usage_error("null argument");
    return guarded([&] {
        if (!out_path || std::string(out_path) == "-") {
            rpt::expt::run(subcommand, cfg->cfg, std::cout);
            std::cout.flush();
            return;
        }
        std::ofstream out(out_path);
        if (!out) throw rpt::parse_error(std::string(out_path) + ": cannot open for writing");
        rpt::expt::run(subcommand, cfg->cfg, out);
    });
}

rpt_status rpt_operator_load(const char* path, rpt_operator** out) {
    if (!path || !out) return usage_error("null argument");
    return guarded([&] { *out = new rpt_operator{rpt::io::load_operator(path)}; });
}

rpt_status rpt_operator_identity(long dim, rpt_operator** out) {
    if (!out) return usage_error("null argument");
    return guarded(
        [&] { *out = new rpt_operator{rpt::DenseOperator::identity(static_cast<int>(dim))}; });
}

rpt_status rpt_operator_save(const rpt_operator* op, const char* path) {
    if (!op || !path) return usage_error("null argument");
    return guarded([&] { rpt::io::save_operator(path, op->op); });
}

void rpt_operator_free(rpt_operator* op) { delete op; }

long rpt_operator_dim(const rpt_operator* op) { return op ? op->op.dim() : 0; }

rpt_status rpt_operator_entry(const rpt_operator* op, long row, long col, double* re,
                              double* im) {
    if (!op || !re || !im) return usage_error("null argument");
    if (row < 0 || row >= op->op.dim() || col < 0 || col >= op->op.dim())
        return usage_error("entry index out of range");
    const rpt::cplx v = op->op.mat()(row, col);
    *re = v.real();
    *im = v.imag();
    return RPT_OK;
}

rpt_status rpt_choi_from_unitary(const rpt_operator* u, rpt_choi** out) {
    if (!u || !out) return usage_error("null argument");
    return guarded([&] {
        rpt::DenseOperator op = u->op;
        if (op.factor_dims().size() == 1 && op.dim() > 1) {
            int n = 0;
            while ((1L << n) < op.dim()) ++n;
            if ((1L << n) != op.dim())
                throw std::invalid_argument("unitary dimension is not a power of two");
            op = rpt::DenseOperator::qubits(op.mat(), n);
        }
        *out = new rpt_choi{rpt::choi::from_unitary(op)};
    });
}

rpt_status rpt_choi_load(const char* path, rpt_choi** out) {
    if (!path || !out) return usage_error("null argument");
    return guarded([&] { *out = new rpt_choi{rpt::io::load_choi(path)}; });
}

rpt_status rpt_choi_save(const rpt_choi* c, const char* path) {
    if (!c || !path) return usage_error("null argument");
    return guarded([&] { rpt::io::save_choi(path, c->choi); });
}

void rpt_choi_free(rpt_choi* c) { delete c; }

int rpt_choi_qubits(const rpt_choi* c) { return c ? c->choi.n() : 0; }

rpt_status rpt_choi_entry(const rpt_choi* c, long row, long col, double* re, double* im) {
    if (!c || !re || !im) return usage_error("null argument");
    const long d = c->choi.mat().rows();
    if (row < 0 || row >= d || col < 0 || col >= d)
        return usage_error("entry index out of range");
    const rpt::cplx v = c->choi.mat()(row, col);
    *re = v.real();
    *im = v.imag();
    return RPT_OK;
}

rpt_status rpt_choi_validate(const rpt_choi* c) {
    if (!c) return usage_error("null argument");
    return guarded([&] { c->choi.validate(); });
}

rpt_status rpt_choi_reduce(const rpt_choi* c, unsigned subset_mask, rpt_choi** out) {
    if (!c || !out) return usage_error("null argument");
    return guarded([&] { *out = new rpt_choi{rpt::choi::reduce(c->choi, subset_mask)}; });
}

rpt_status rpt_choi_apply(const rpt_choi* c, const rpt_operator* rho, rpt_operator** out) {
    if (!c || !rho || !out) return usage_error("null argument");
    return guarded([&] { *out = new rpt_operator{rpt::choi::apply(c->choi, rho->op)}; });
}

rpt_status rpt_choi_process_fidelity(const rpt_choi* a, const rpt_choi* b,
                                     double* state_fidelity, double* avg_fidelity) {
    if (!a || !b || !state_fidelity || !avg_fidelity) return usage_error("null argument");
    return guarded([&] {
        const rpt::ProcessFidelity pf = rpt::choi::process_fidelity(a->choi, b->choi);
        *state_fidelity = pf.state_fidelity;
        *avg_fidelity = pf.avg_fidelity;
    });
}

}  // extern "C"
