#pragma once

#include <thermolen/errors.hpp>
#include <thermolen/state.hpp>
#include <thermolen/eos.hpp>
#include <thermolen/quad.hpp>
#include <thermolen/response.hpp>
#include <thermolen/metric.hpp>
#include <thermolen/length.hpp>
