from .core import Ruth, RuthMorphism, equation_name, split_by_form_degree
from .constructions import (adjoint, antisymmetrizer, change_of_connection, coadjoint, double,
                            double_change_of_connection, dualize, exterior_power, forms_rep,
                            pairing_check, representation, sign_twist, tensor, trivial)
from .homotopy import (ExactSequenceReport, SerreData, TransferResult, exact_homotopy, exact_rep,
                       intertwiner, long_exact_sequence, serre_rep, transfer, transported_connection,
                       twist_connection)
from .extensions import ExtensionResult, extension_from_length1
from .deformation import (DeformationCochain, K1Differential, KDifferentialVerdict, deformation_betti,
                          deformation_complex, deformation_differential, k_differential_check,
                          psi_bridge, psi_intertwines)

__all__ = [
    "Ruth", "RuthMorphism", "equation_name", "split_by_form_degree",
    "adjoint", "antisymmetrizer", "change_of_connection", "coadjoint", "double", "double_change_of_connection",
    "dualize", "exterior_power", "forms_rep", "pairing_check", "representation", "sign_twist", "tensor", "trivial",
    "ExactSequenceReport", "SerreData", "TransferResult", "exact_homotopy", "exact_rep", "intertwiner",
    "long_exact_sequence", "serre_rep", "transfer", "transported_connection", "twist_connection",
    "ExtensionResult", "extension_from_length1",
    "DeformationCochain", "K1Differential", "KDifferentialVerdict", "deformation_betti", "deformation_complex",
    "deformation_differential", "k_differential_check", "psi_bridge", "psi_intertwines",
]
