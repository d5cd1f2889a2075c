#pragma once

#include <multideriv/basis.hpp>
#include <multideriv/format.hpp>
#include <multideriv/json_io.hpp>
#include <multideriv/selftest.hpp>
