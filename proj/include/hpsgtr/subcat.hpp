#pragma once

// List and set predicates for subcategorization structures.
//
// A subcat value mixes ordered lists and unordered sets, with elements
// optionally wrapped as opt/obl. `removeop` enumerates the variants with
// optional arguments omitted or kept, `surface` flattens the result into
// the possible surface orders (lists stay ordered, set members permute),
// and selectlast/selectfirst take one complement off a surface order.

#include "clauses.hpp"

namespace hpsgtr {

inline constexpr const char* kListSetClauses = R"CLAUSES(
append([],Xs,Xs) if true.
append([H|T1],L2,[H|T2]) if append(T1,L2,T2).

appends(e_list,X,X) if true,!.
appends([A],(X,ne_set),[A|[X]]) if true,!.
appends(X,[],X) if true,!.
appends((X,set),(L,list),[X|L]) if true.
appends([X|Rx],Y,[X|Res]) if appends(Rx,Y,Res).
appends((el:X,els:Rx),(Y,set),(el:X,els:Res)) if appends(Rx,Y,Res).

listlast(X,(hd:X,tl:e_list),e_list) if true,!.
listlast(X,[H|T],[H|R]) if listlast(X,T,R).

permut(e_list,e_list) if true,!.
permut((X,set),(X,set)) if true.
permut((el:X,els:R),(el:Y,els:(el:X,els:R2))) if permut(R,(el:Y,els:R2)).

selectlast(Arg,(ne_list_synsem,Sursub),Reslist) if listlast(Arg,Sursub,Reslist),!.
selectlast(Arg,Sub,Reslist) if
    removeop(Sub,SubRem), surface(SubRem,Sursub), listlast(Arg,Sursub,Reslist).

sselectlast(Arg,Sub,Reslist) if selectlast(Arg,Sub,Reslist).

selectfirst(Arg,(ne_list_synsem,[Arg|Rest]),Rest) if !,true.
selectfirst(Arg,Sub,Reslist) if
    removeop(Sub,SubRem), surface(SubRem,[Arg|Reslist]).

select(Arg,(s_arg:Arg),[]) if true.
select(Arg,(Arg,subcat_type),[]) if true.
select(T,(X,set),Z) if permut(X,(el:Ct,els:Cr)), select(T,Ct,Res), appends(Res,Cr,Z).
select(T,[Xt|R],Z) if select(T,Xt,Res), appends(Res,R,Z).

appendset(e_list,(set,X),X) if true.
appendset((el:El,els:Rels),(set,S2),(el:El,els:Res)) if appendset(Rels,S2,Res).

removeop([],[]) if true.
removeop(s_arg:X,(obl,s_arg:X)) if true.
removeop([(opt)|R],R2) if removeop(R,R2).
removeop([H|R],[H2|R2]) if removeop(H,H2),removeop(R,R2).
removeop((el:(opt),els:R),R2) if removeop(R,R2).
removeop((el:H,els:R),(el:H2,els:R2)) if removeop(H,H2),removeop(R,R2).

surface(e_list,e_list) if true.
surface(X,[T|Rs]) if select(T,X,R), surface(R,Rs).
)CLAUSES";

inline void register_list_set_clauses(ClauseDB& db) {
    db.load(kListSetClauses, "<list-set>");
}

} // namespace hpsgtr
