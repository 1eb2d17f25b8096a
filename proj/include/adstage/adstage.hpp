#pragma once

// Umbrella header.

#include "adstage/cohort.hpp"
#include "adstage/distributions.hpp"
#include "adstage/ensemble.hpp"
#include "adstage/eval.hpp"
#include "adstage/knn.hpp"
#include "adstage/logistic.hpp"
#include "adstage/model.hpp"
#include "adstage/naive_bayes.hpp"
#include "adstage/random.hpp"
#include "adstage/report.hpp"
#include "adstage/standardize.hpp"
#include "adstage/stats.hpp"
#include "adstage/svm.hpp"
#include "adstage/synth.hpp"
#include "adstage/tree.hpp"
