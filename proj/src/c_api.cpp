/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/dclab.h"

#include <exception>
#include <new>
#include <string>

#include "dclab/config.hpp"
#include "dclab/experiments.hpp"
#include "dclab/field_io.hpp"
#include "dclab/radial.hpp"
#include "dclab/table.hpp"

struct dclab_config {
    dclab::ExperimentConfig cfg;
    std::string text;
};

struct dclab_result {
    dclab::ExperimentResult res;
    std::string csv;
};

struct dclab_field {
    dclab::ScalarField field;
};

namespace {

thread_local std::string last_error;

template <class F>
dclab_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return DCLAB_OK;
    } catch (const dclab::Error& e) {
        last_error = e.what();
        return static_cast<dclab_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown exception";
    }
    return DCLAB_INTERNAL;
}

void need(const void* p, const char* what)
{
    dclab::require(p != nullptr, dclab::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* dclab_version(void) { return dclab::version(); }

const char* dclab_last_error(void) { return last_error.c_str(); }

const char* dclab_status_name(dclab_status status)
{
    if (status == DCLAB_OK) return "ok";
    if (status < DCLAB_INVALID_ARGUMENT || status > DCLAB_INTERNAL) return "unknown";
    return dclab::to_string(static_cast<dclab::ErrorCode>(status));
}

dclab_status dclab_config_load(const char* path, dclab_config** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new dclab_config{dclab::load_config(path), {}};
    });
}

dclab_status dclab_config_parse(const char* text, dclab_config** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new dclab_config{dclab::parse_config(text), {}};
    });
}

dclab_status dclab_config_set(dclab_config* cfg, const char* section, const char* key, const char* value)
{
    return guarded([&] {
        need(cfg, "config");
        need(section, "section");
        need(key, "key");
        need(value, "value");
        dclab::set_config_value(cfg->cfg, section, key, value);
    });
}

dclab_status dclab_config_get(dclab_config* cfg, const char* section, const char* key, const char** out)
{
    return guarded([&] {
        need(cfg, "config");
        need(section, "section");
        need(key, "key");
        need(out, "out");
        cfg->text = dclab::get_config_value(cfg->cfg, section, key);
        *out = cfg->text.c_str();
    });
}

dclab_status dclab_config_serialize(dclab_config* cfg, const char** out)
{
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        cfg->text = dclab::serialize_config(cfg->cfg);
        *out = cfg->text.c_str();
    });
}

dclab_status dclab_config_hash(const dclab_config* cfg, uint64_t* out)
{
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        *out = cfg->cfg.hash;
    });
}

dclab_status dclab_config_kind(const dclab_config* cfg, const char** out)
{
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        *out = dclab::to_string(cfg->cfg.kind);
    });
}

void dclab_config_free(dclab_config* cfg) { delete cfg; }

uint64_t dclab_hash_bytes(const char* data, size_t size)
{
    return data ? dclab::fnv1a64(std::string(data, size)) : dclab::fnv1a64(std::string());
}

dclab_status dclab_run(const dclab_config* cfg, dclab_result** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        try {
            *out = new dclab_result{dclab::run_experiment(cfg->cfg), {}};
        } catch (const dclab::Error& e) {
            throw dclab::Error(e.code(), std::string(dclab::to_string(cfg->cfg.kind)) + " experiment: " + e.what(),
                               e.node());
        }
    });
}

int dclab_result_passed(const dclab_result* res) { return res && res->res.passed() ? 1 : 0; }

size_t dclab_result_assertion_count(const dclab_result* res) { return res ? res->res.assertions.size() : 0; }

dclab_status dclab_result_assertion(const dclab_result* res, size_t index, const char** name, int* pass,
                                    const char** detail)
{
    return guarded([&] {
        need(res, "result");
        dclab::require(index < res->res.assertions.size(), dclab::ErrorCode::OutOfRange, "assertion index out of range");
        const dclab::Assertion& a = res->res.assertions[index];
        if (name) *name = a.name.c_str();
        if (pass) *pass = a.pass ? 1 : 0;
        if (detail) *detail = a.detail.c_str();
    });
}

dclab_status dclab_result_csv(dclab_result* res, const char** out)
{
    return guarded([&] {
        need(res, "result");
        need(out, "out");
        res->csv = res->res.table.to_csv();
        *out = res->csv.c_str();
    });
}

dclab_status dclab_result_write(const dclab_result* res, const dclab_config* cfg, const char* dir)
{
    return guarded([&] {
        need(res, "result");
        need(cfg, "config");
        need(dir, "dir");
        dclab::write_result(res->res, cfg->cfg, dir);
    });
}

size_t dclab_result_field_count(const dclab_result* res) { return res ? res->res.fields.size() : 0; }

dclab_status dclab_result_field(const dclab_result* res, size_t index, const char** name, dclab_field** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        need(res, "result");
        need(out, "out");
        dclab::require(index < res->res.fields.size(), dclab::ErrorCode::OutOfRange, "field index out of range");
        if (name) *name = res->res.fields[index].name.c_str();
        *out = new dclab_field{res->res.fields[index].field};
    });
}

void dclab_result_free(dclab_result* res) { delete res; }

dclab_status dclab_field_read(const char* path, dclab_field** out)
{
    if (out) *out = nullptr;
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new dclab_field{dclab::read_field(path)};
    });
}

dclab_status dclab_field_write(const dclab_field* field, const char* path, int binary)
{
    return guarded([&] {
        need(field, "field");
        need(path, "path");
        dclab::write_field(field->field, path, binary != 0);
    });
}

int dclab_field_dim(const dclab_field* field) { return field ? field->field.grid().dim : 0; }

int dclab_field_cells(const dclab_field* field, int axis)
{
    if (!field || axis < 0 || axis >= field->field.grid().dim) return 0;
    return field->field.grid().cells[axis];
}

double dclab_field_spacing(const dclab_field* field) { return field ? field->field.grid().spacing() : 0.0; }

double dclab_field_origin(const dclab_field* field, int axis)
{
    if (!field || axis < 0 || axis >= field->field.grid().dim) return 0.0;
    return field->field.grid().origin[axis];
}

size_t dclab_field_size(const dclab_field* field) { return field ? field->field.size() : 0; }

const double* dclab_field_data(const dclab_field* field) { return field ? field->field.values().data() : nullptr; }

void dclab_field_free(dclab_field* field) { delete field; }

dclab_status dclab_upsilon(double lambda, double gamma, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = dclab::upsilon(lambda, gamma);
    });
}

}  // extern "C"
