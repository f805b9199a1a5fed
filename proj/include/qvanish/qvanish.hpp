#pragma once

#include "qvanish/errors.hpp"
#include "qvanish/partitions.hpp"
#include "qvanish/products.hpp"
#include "qvanish/series.hpp"
#include "qvanish/vanishing.hpp"
