#pragma once

#include "coru/baselines.hpp"
#include "coru/bounds.hpp"
#include "coru/corutv.hpp"
#include "coru/flops.hpp"
#include "coru/io.hpp"
#include "coru/matrix.hpp"
#include "coru/norms.hpp"
#include "coru/parallel.hpp"
#include "coru/qr.hpp"
#include "coru/rng.hpp"
#include "coru/rpca.hpp"
#include "coru/svd.hpp"
#include "coru/testgen.hpp"
